"""Quantum-number range parsing utilities."""
import re

RANGE_PATTERN = re.compile(r'^\s*(\d+)\s*(?:\.\.|-|:)\s*(\d+)\s*$')


class RangeParseError(ValueError):
    """Range specification could not be parsed."""
    pass


def parse_index_range(spec, name='range'):
    """
    Parse an index range like 3, [0, 2, 5], "0..3" or "1-4".

    Args:
        spec: Integer, list of integers, or an inclusive range string
        name: Field name used in error messages

    Returns:
        Sorted list of distinct nonnegative integers (never empty)
    """
    if isinstance(spec, bool):
        raise RangeParseError(f"{name}: expected an integer, list or range, got {spec!r}")

    if isinstance(spec, int):
        values = [spec]
    elif isinstance(spec, float) and spec.is_integer():
        values = [int(spec)]
    elif isinstance(spec, str):
        stripped = spec.strip()
        match = RANGE_PATTERN.match(stripped)
        if match:
            low, high = int(match.group(1)), int(match.group(2))
            if high < low:
                raise RangeParseError(f"{name}: empty range {spec!r}")
            values = list(range(low, high + 1))
        elif stripped.isdigit():
            values = [int(stripped)]
        else:
            raise RangeParseError(f"{name}: cannot parse range {spec!r}")
    elif isinstance(spec, (list, tuple)):
        values = []
        for item in spec:
            values.extend(parse_index_range(item, name))
    else:
        raise RangeParseError(f"{name}: expected an integer, list or range, got {spec!r}")

    if not values:
        raise RangeParseError(f"{name}: range is empty")
    if any(v < 0 for v in values):
        raise RangeParseError(f"{name}: values must be nonnegative")
    return sorted(set(values))
