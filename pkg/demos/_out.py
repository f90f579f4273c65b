"""Shared output directory for the demo scripts."""

import os
from pathlib import Path


def out_dir(name: str) -> Path:
    root = Path(os.environ.get("LOOMNAV_OUT", "demo_out")) / name
    root.mkdir(parents=True, exist_ok=True)
    return root
