"""Number formatting utilities."""
import math

from kgring.config import Config


def format_number(value, digits=None):
    """
    Format a number for CSV output.

    Uses `digits` significant digits, '.' as decimal separator and no locale.
    None and non-finite values become empty strings.
    """
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return ''
        digits = digits or Config.CSV_DIGITS
        return format(value, f'.{digits}g')
    if isinstance(value, (list, tuple)):
        return ';'.join(format_number(v, digits) for v in value)
    return str(value)


def json_safe(value):
    """Replace non-finite floats (recursively) with None so strict JSON parsers accept the output."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if hasattr(value, 'item') and callable(value.item):
        return json_safe(value.item())
    return value
