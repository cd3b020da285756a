"""Run the acceptance suite and print only the per-criterion PASS/FAIL lines."""
import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def main():
    proc = subprocess.run([sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-q", "-p", "no:cacheprovider"],
                          cwd=ROOT, capture_output=True, text=True)
    lines = [l for l in proc.stdout.splitlines() if l.startswith(("PASS criterion", "FAIL criterion"))]
    print("\n".join(lines) if lines else proc.stdout)
    print(proc.stdout.strip().splitlines()[-1])
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
