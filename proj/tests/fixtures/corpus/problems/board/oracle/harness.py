import copy
import importlib.util
import sys


def load(path):
    spec = importlib.util.spec_from_file_location("candidate", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def run(entry_point, cases, check):
    try:
        module = load(sys.argv[1])
    except BaseException as exc:  # the candidate may even call sys.exit
        print("ERROR import failed: %s" % type(exc).__name__)
        sys.exit(1)
    target = getattr(module, entry_point, None)
    if target is None:
        print("ERROR missing %s" % entry_point)
        sys.exit(1)
    passed = 0
    for case in cases:
        try:
            if check(target, copy.deepcopy(case)):
                passed += 1
        except Exception:
            pass
    print("PASSED %d TOTAL %d" % (passed, len(cases)))
