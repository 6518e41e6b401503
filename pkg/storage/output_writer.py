"""
Output Writer
Figure-ready CSV polylines and JSON reports
"""

import json
import logging

logger = logging.getLogger(__name__)

PROGRAM = 'maganiso'
POLYLINE_COLUMNS = 'theta,x1,x2'
SIGNIFICANT_DIGITS = 12


def format_number(value):
    """Shortest repr of value rounded to 12 significant digits"""
    return repr(float(f"{float(value):.{SIGNIFICANT_DIGITS}g}"))


def provenance_line(subcommand, digest):
    return f"# {PROGRAM} {subcommand} {digest}"


def write_polylines(handle, subcommand, digest, blocks):
    """
    Write one or more polylines as CSV

    Layout: provenance comment, column header, then per block a
    `# <label>` comment followed by `theta,x1,x2` rows.

    Args:
        handle: Text stream
        subcommand: Producing subcommand name
        digest: Model hash
        blocks: Sequence of (label, Polyline), label like 'level=0.5'
    """
    lines = [provenance_line(subcommand, digest), POLYLINE_COLUMNS]
    for label, polyline in blocks:
        lines.append(f"# {label}")
        for theta, (x1, x2) in zip(polyline.thetas, polyline.points):
            lines.append(','.join(format_number(v) for v in (theta, x1, x2)))

    handle.write('\n'.join(lines) + '\n')
    logger.debug(f"Wrote {len(blocks)} polylines for {subcommand}")


def read_polylines(handle):
    """
    Read CSV written by write_polylines

    Returns:
        List of (label, rows) with rows as lists of (theta, x1, x2) floats
    """
    blocks = []
    for raw in handle:
        line = raw.strip()
        if not line or line == POLYLINE_COLUMNS or line.startswith(f"# {PROGRAM} "):
            continue
        if line.startswith('#'):
            blocks.append((line[1:].strip(), []))
            continue
        blocks[-1][1].append(tuple(float(v) for v in line.split(',')))
    return blocks


def write_json(handle, subcommand, digest, report):
    """
    Write a JSON report with provenance fields

    Args:
        handle: Text stream
        subcommand: Producing subcommand name
        digest: Model hash
        report: JSON-serializable dict
    """
    payload = {'program': PROGRAM, 'subcommand': subcommand, 'model_hash': digest}
    payload.update(report)
    handle.write(json.dumps(payload, indent=2, sort_keys=True) + '\n')
