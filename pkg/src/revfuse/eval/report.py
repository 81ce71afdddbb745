"""Condition grids of WERs, row averages and relative reductions."""

import csv
import io

from ..exceptions import RevfuseError


class ConditionGrid:
    """Rectangular table ``label -> condition -> WER%``.

    Row and column order follow insertion order.
    """

    def __init__(self, rows=None):
        self._rows = {}
        self._conditions = None
        for label, cells in (rows or {}).items():
            self.add_row(label, cells)

    def add_row(self, label, cells):
        cells = {str(k): float(v) for k, v in dict(cells).items()}
        if not cells:
            raise RevfuseError(f"row {label!r} has no cells")
        if self._conditions is None:
            self._conditions = list(cells)
        elif set(cells) != set(self._conditions):
            raise RevfuseError(
                f"non-rectangular grid: row {label!r} has conditions {sorted(cells)}, "
                f"expected {sorted(self._conditions)}"
            )
        self._rows[str(label)] = {c: cells[c] for c in self._conditions}

    @property
    def labels(self):
        return list(self._rows)

    @property
    def conditions(self):
        return list(self._conditions or [])

    def row(self, label):
        try:
            return self._rows[label]
        except KeyError:
            raise RevfuseError(f"no row labelled {label!r}") from None

    def __contains__(self, label):
        return label in self._rows

    def __len__(self):
        return len(self._rows)

    @classmethod
    def from_csv(cls, path):
        """Read ``label,cond1,cond2,...`` rows; an ``avg`` column is ignored."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if not header or len(header) < 2:
                raise RevfuseError(f"{path}: expected a header 'label,cond1,cond2,...'")
            # an "avg" column written by to_csv is derived, not a condition
            keep = [i for i, name in enumerate(header) if i > 0 and name.lower() != "avg"]
            grid = cls()
            for lineno, rec in enumerate(reader, 2):
                if not rec:
                    continue
                if len(rec) != len(header):
                    raise RevfuseError(f"{path}:{lineno}: non-rectangular grid row")
                try:
                    grid.add_row(rec[0], {header[i]: float(rec[i]) for i in keep})
                except ValueError:
                    raise RevfuseError(f"{path}:{lineno}: non-numeric WER cell") from None
        return grid

    def to_csv(self, with_average=True):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", *self.conditions] + (["avg"] if with_average else []))
        for label in self.labels:
            cells = [f"{v:.2f}" for v in self.row(label).values()]
            if with_average:
                cells.append(f"{row_average(self, label):.2f}")
            writer.writerow([label, *cells])
        return buf.getvalue()


def row_average(grid, label):
    """Arithmetic mean of a row, rounded to 2 decimals."""
    cells = grid.row(label)
    return round(sum(cells.values()) / len(cells), 2)


def relative_reduction(baseline_wer, system_wer):
    """Percent WER reduction relative to the baseline, rounded to 1 decimal."""
    if not baseline_wer > 0:
        raise RevfuseError(f"baseline WER must be positive, got {baseline_wer}")
    return round(100.0 * (baseline_wer - system_wer) / baseline_wer, 1)


def render_report(grid, baseline_label, title=None):
    """Fixed-width table: per-condition WERs, average, reduction vs baseline.

    Reductions print as ``n/a`` when the baseline average is zero.
    """
    if baseline_label not in grid:
        raise RevfuseError(f"baseline {baseline_label!r} not in grid")
    conds = grid.conditions
    label_w = max(len("System"), *(len(lab) for lab in grid.labels))
    col_w = max(8, *(len(c) for c in conds))
    base = row_average(grid, baseline_label)

    def line(cells):
        return "  ".join(cells).rstrip()

    header = [f"{'System':<{label_w}}", *(f"{c:>{col_w}}" for c in conds),
              f"{'Avg.':>{col_w}}", f"{'RelRed%':>{col_w}}"]
    out = []
    if title:
        out.append(title)
    out.append(line(header))
    out.append("-" * len(line(header)))
    for label in grid.labels:
        cells = [f"{v:>{col_w}.2f}" for v in grid.row(label).values()]
        avg = row_average(grid, label)
        red = f"{relative_reduction(base, avg):.1f}" if base > 0 else "n/a"
        out.append(line([f"{label:<{label_w}}", *cells, f"{avg:>{col_w}.2f}", f"{red:>{col_w}}"]))
    out.append(f"(relative reduction vs {baseline_label})")
    return "\n".join(out) + "\n"
