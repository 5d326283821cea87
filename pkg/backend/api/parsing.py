"""
Argument parsing shared by the command handlers.

Groups are comma-separated factor lists ('2,4,4'); sets are comma-separated
element indices ('0,1,5') or a JSON list of coordinate lists
('[[0,0,0],[0,0,1]]').
"""
import json
from typing import Tuple

from core.abelian import ElementSet, GroupSpec

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


def parse_group(text: str) -> GroupSpec:
    try:
        return GroupSpec.parse(text)
    except ValueError as e:
        raise ValueError(f"Malformed group '{text}': {e}") from e


def parse_set(text: str, spec: GroupSpec) -> ElementSet:
    text = text.strip()
    if text.startswith('['):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"Malformed coordinate list: {e}") from e
    else:
        try:
            items = [int(part) for part in text.split(',') if part.strip()]
        except ValueError as e:
            raise ValueError(f"Malformed element indices '{text}'") from e
    if not items:
        raise ValueError("Element sets must be nonempty")
    return spec.normalize_set(items)


def parse_sizes(text: str) -> Tuple[int, int]:
    try:
        ssize, tsize = (int(part) for part in text.split(','))
    except ValueError as e:
        raise ValueError(f"Sizes must look like '6,30', got '{text}'") from e
    return ssize, tsize
