# completion/templatetags/report_filters.py
import math

from django import template

register = template.Library()


@register.filter
def num(value, digits=10):
    """Format a number with ``digits`` significant digits; None means undefined."""
    if value is None:
        return "undefined"
    try:
        value = float(value)
    except (TypeError, ValueError):
        return value
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{int(digits)}g}"


@register.filter
def zstatus(row, threshold):
    """Verdict for one comparison row."""
    if row.informational:
        return "info"
    return "ok" if row.within(float(threshold)) else "MISMATCH"


@register.filter
def method_label(value):
    labels = {
        "closed_form": "closed form",
        "quadrature": "quadrature",
        "degenerate": "degenerate (R = p)",
    }
    return labels.get(str(value), str(value))
