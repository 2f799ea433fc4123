"""Grounded LLM code generation for low-resource HDLs.

The heavy lifting lives in the compiled ``hdlagent._core`` extension; this
package adds small conveniences on top (JSON decoding of run records).
"""

import json as _json

from ._core import (
    HdlAgentError,
    Profile,
    build_initial_query,
    bundled_profiles,
    bucket_label,
    check_io_match,
    count_loc,
    estimate_tokens,
    extract_code,
    interface_ports,
    load_profile,
    normalize_interface,
    pass_at_k,
    qor_ratio,
    run_scripted_json,
    summarize_prompt,
    __version__,
)

__all__ = [
    "HdlAgentError",
    "Profile",
    "build_initial_query",
    "bundled_profiles",
    "bucket_label",
    "check_io_match",
    "count_loc",
    "estimate_tokens",
    "extract_code",
    "interface_ports",
    "load_profile",
    "normalize_interface",
    "pass_at_k",
    "qor_ratio",
    "run_scripted",
    "summarize_prompt",
    "__version__",
]


def run_scripted(question, profile, responses, stage="fixes", max_iterations=8):
    """Run the repair loop against scripted responses.

    Returns the run record as a dict: question, profile_name, stage,
    final_status, final_code, iterations, and the token ledger.
    """
    return _json.loads(
        run_scripted_json(question, profile, responses, stage, max_iterations)
    )
