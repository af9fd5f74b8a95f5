#!/usr/bin/env python3
"""Solve exported LP files with HiGHS and print one JSON object per file.

Optional helper: needs the `highspy` package. Exit code 3 when it is missing.
"""
import json
import sys


def main(paths):
    try:
        import highspy
    except ImportError:
        print("highspy not available", file=sys.stderr)
        return 3
    for path in paths:
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        if h.readModel(path) != highspy.HighsStatus.kOk:
            print(json.dumps({"file": path, "status": "read-error"}))
            continue
        h.run()
        status = h.modelStatusToString(h.getModelStatus())
        out = {"file": path, "status": status}
        if status == "Optimal":
            out["objective"] = h.getInfo().objective_function_value
        print(json.dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
