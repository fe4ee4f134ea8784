import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        checks = results[key]
        status = "PASS" if all(ok for _, ok in checks) else "FAIL"
        detail = "; ".join(f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in checks)
        terminalreporter.write_line(f"criterion {key}: {status} ({detail})")
