"""CSV, JSON and XLSX emitters for result tables and reports."""
import csv
import io
import json

from openpyxl import Workbook
from openpyxl.styles import Font

from kgring.utils.formatting import format_number, json_safe


class OutputError(Exception):
    """Table could not be written in the requested format."""
    pass


def render_csv(table):
    """Header plus one line per row; numbers at 15 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_number(row.get(column)) for column in table.columns])
    return buffer.getvalue()


def render_json(payload):
    """Strict JSON: sorted keys, no NaN or Infinity."""
    return json.dumps(json_safe(payload), sort_keys=True, allow_nan=False, indent=2) + '\n'


def table_payload(table):
    return {
        'columns': list(table.columns),
        'rows': [{column: row.get(column) for column in table.columns} for row in table.rows],
    }


def write_xlsx(table, path):
    """
    Write the table to a single-sheet workbook.

    Args:
        table: Table with columns and rows
        path: Destination .xlsx path
    """
    wb = Workbook()
    ws = wb.active
    ws.title = 'results'

    header_font = Font(bold=True)
    ws.append(table.columns)
    for cell in ws[1]:
        cell.font = header_font

    for row in table.rows:
        values = []
        for column in table.columns:
            value = json_safe(row.get(column))
            if isinstance(value, list):
                value = format_number(value)
            values.append(value)
        ws.append(values)

    wb.save(path)


def write_table(table, fmt, path=None):
    """
    Emit a table in csv, json or xlsx.

    Args:
        table: Table to write
        fmt: 'csv', 'json' or 'xlsx'
        path: Output file; None returns the text for the caller to print

    Returns:
        The rendered text for csv and json, None for xlsx
    """
    if fmt == 'xlsx':
        if not path:
            raise OutputError("xlsx output needs an output path")
        write_xlsx(table, path)
        return None
    if fmt == 'csv':
        text = render_csv(table)
    elif fmt == 'json':
        text = render_json(table_payload(table))
    else:
        raise OutputError(f"Unsupported output format: {fmt}")
    if path:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    return text
