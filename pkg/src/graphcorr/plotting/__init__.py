from .figures import CLASS_COLORS, matchability_plot, matchability_svg, runtime_plot, runtime_svg
from .svg import SvgCanvas

__all__ = ["CLASS_COLORS", "SvgCanvas", "matchability_plot", "matchability_svg", "runtime_plot", "runtime_svg"]
