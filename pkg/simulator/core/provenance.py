"""
Provenance helpers shared by the simulation commands.
"""

import hashlib
import json
from typing import Any, Dict, Mapping, Optional

from django.conf import settings


def canonical_json(data: Any) -> str:
    """Key-sorted, whitespace-free JSON used for hashing."""
    return json.dumps(data, sort_keys=True, separators=(',', ':'), allow_nan=False)


def config_digest(config: Mapping[str, Any]) -> str:
    """sha256 hex digest of the effective configuration."""
    return hashlib.sha256(canonical_json(config).encode('utf-8')).hexdigest()


def run_metadata(config: Mapping[str, Any], seed: Optional[int] = None) -> Dict[str, Any]:
    """Metadata block attached to every result file."""
    return {
        'tool_version': settings.TOOL_VERSION,
        'config_hash': config_digest(config),
        'seed': seed,
        'config': dict(config),
    }
