"""Minimal SVG writer: points, polylines and text, nothing else."""

from __future__ import annotations

from dataclasses import dataclass, field
from os import PathLike
from typing import Sequence
from xml.sax.saxutils import escape

__all__ = ["SvgCanvas"]


def _num(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


@dataclass
class SvgCanvas:
    """Data-space canvas mapped onto a pixel box with fixed margins.

    y grows upwards in data space, as on a plot.
    """

    xlim: tuple[float, float]
    ylim: tuple[float, float]
    width: int = 480
    height: int = 480
    margin: int = 56
    _items: list[str] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.xlim[1] <= self.xlim[0] or self.ylim[1] <= self.ylim[0]:
            raise ValueError("axis limits must be increasing")

    def px(self, x: float, y: float) -> tuple[float, float]:
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        w = self.width - 2 * self.margin
        h = self.height - 2 * self.margin
        return (self.margin + (x - x0) / (x1 - x0) * w, self.height - self.margin - (y - y0) / (y1 - y0) * h)

    def point(self, x: float, y: float, color: str = "black", r: float = 4.0, title: str | None = None) -> None:
        cx, cy = self.px(x, y)
        tip = f"<title>{escape(title)}</title>" if title else ""
        self._items.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(r)}" fill="{color}">{tip}</circle>')

    def polyline(self, xs: Sequence[float], ys: Sequence[float], color: str = "black", width: float = 1.5, dash: str | None = None) -> None:
        pts = " ".join("{},{}".format(*map(_num, self.px(x, y))) for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self._items.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{_num(width)}"{extra}/>')

    def text(self, x: float, y: float, s: str, size: int = 12, anchor: str = "middle", data: bool = True, rotate: float = 0.0) -> None:
        """Text at data coordinates, or at pixel coordinates when ``data`` is False."""
        px, py = self.px(x, y) if data else (x, y)
        rot = f' transform="rotate({_num(rotate)} {_num(px)} {_num(py)})"' if rotate else ""
        self._items.append(
            f'<text x="{_num(px)}" y="{_num(py)}" font-size="{size}" font-family="sans-serif" '
            f'text-anchor="{anchor}"{rot}>{escape(s)}</text>'
        )

    def axes(self, xlabel: str, ylabel: str, ticks: int = 5) -> None:
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        self.polyline([x0, x1, x1, x0, x0], [y0, y0, y1, y1, y0], color="#444", width=1.0)
        for k in range(ticks + 1):
            tx = x0 + (x1 - x0) * k / ticks
            ty = y0 + (y1 - y0) * k / ticks
            px, py = self.px(tx, y0)
            self.text(px, py + 16, f"{tx:.3g}", size=10, data=False)
            px, py = self.px(x0, ty)
            self.text(px - 6, py + 4, f"{ty:.3g}", size=10, anchor="end", data=False)
        self.text(self.width / 2, self.height - 12, xlabel, data=False)
        self.text(16, self.height / 2, ylabel, data=False, rotate=-90)

    def title(self, s: str) -> None:
        self.text(self.width / 2, self.margin / 2, s, size=14, data=False)

    def to_string(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        body = [f'<rect width="{self.width}" height="{self.height}" fill="white"/>', *self._items]
        return "\n".join([head, *body, "</svg>"]) + "\n"

    def save(self, path: str | PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_string())
