def pytest_runtest_logreport(report):
    # one verdict line per acceptance check, printed even when it fails
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    verdict = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    print(f"\n[{verdict}] {name}", flush=True)
