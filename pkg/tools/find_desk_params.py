"""Re-run the DESK parameter search and compare with the committed constants.

    python tools/find_desk_params.py

Prints the parameter set as a text config.
"""
import sys

from tmis_workbench.params import DESK, params_to_text, search_desk_params

found = search_desk_params()
sys.stdout.write(params_to_text(found))
if found != DESK:
    sys.exit("search result differs from the committed DESK constants")
print("# matches committed DESK constants", file=sys.stderr)
