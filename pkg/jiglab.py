#!/usr/bin/env python3
"""
Jigsaw Lab - random jigsaw puzzle generation, assembly counting and entropy experiments

Usage examples:
    python jiglab.py gen -n 2 -q 2 --seed 7 -o p.json
    python jiglab.py solve p.json --json
    python jiglab.py entropy --n 2 --q 2 --method exact
    python jiglab.py sweep --n-values 5 --q-values 2,3,4 --trials 100 --jobs 4 -o sweep.csv
"""

import sys
import os

# Add project path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

try:
    from jigsaw_lab.cli import main
except ImportError as e:
    print(f"❌ Import error: {e}")
    print("Please install required dependencies:")
    print("pip install numpy tqdm Pillow")
    sys.exit(1)


if __name__ == "__main__":
    sys.exit(main())
