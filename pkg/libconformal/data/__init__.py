"""
Non-code files
"""

import json
from importlib import resources

with resources.path(__name__, "run_config.schema.json") as schema_file, open(
    schema_file, "r", encoding="utf8", errors="strict"
) as schema_fp:
    RUN_CONFIG_SCHEMA = json.load(schema_fp)
