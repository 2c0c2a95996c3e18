#!/usr/bin/env python3
# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""
Quick start script for acc-treekit.
Run this to see the ACC transformation on the bundled sample corpus.
"""

import os
import sys

from dotenv import load_dotenv

# Load environment
load_dotenv()


def check_environment_setup() -> bool:
    """Report the optional ACC_TREEKIT_* settings."""

    print("=== Environment Check ===")

    for var in ("ACC_TREEKIT_LOG_LEVEL", "ACC_TREEKIT_JOBS", "ACC_TREEKIT_COLOR"):
        print(f"  {var}: {os.getenv(var, '(default)')}")

    ptb_dir = os.getenv("ACC_TREEKIT_PTB_DIR")
    if ptb_dir and not os.path.isdir(ptb_dir):
        print(f"✗ ACC_TREEKIT_PTB_DIR does not exist: {ptb_dir}")
        return False
    print(f"✓ PTB directory: {ptb_dir or 'not set, using the bundled sample only'}")
    return True


def run_sample() -> bool:
    """Transform the sample, print the census and the grammar changes."""

    try:
        from acc_treekit.acc import census, format_table, transform_corpus
        from acc_treekit.data import sample_path
        from acc_treekit.pcfg_lab import extract_grammar, rule_diff
        from acc_treekit.treebank_io import read_corpus, serialize

        print("1. Reading the sample corpus...")
        trees = read_corpus(sample_path())
        print(f"✓ {len(trees)} trees")

        print("\n2. Transforming ACC coordinations...")
        transformed, records = transform_corpus(trees, source="sample.mrg")
        applied = [r for r in records if r.applied]
        print(f"✓ {len(applied)} of {len(records)} candidates rewritten")
        print(f"\nBefore: {serialize(trees[2])}")
        print(f"After:  {serialize(transformed[2])}")

        print("\n3. Census")
        print(format_table(census(trees)))

        print("\n4. Grammar changes on the rewritten trees")
        modified = sorted({int(r.tree_id.split("#")[1]) for r in applied})
        diff = rule_diff(
            extract_grammar([trees[i] for i in modified]),
            extract_grammar([transformed[i] for i in modified]),
        )
        for rule in diff.only_in_second:
            print(f"  + {rule}")
        for rule in diff.only_in_first:
            print(f"  - {rule}")

        print("\n✓ acc-treekit is working. Try:")
        print("  acc-treekit transform --in your.mrg --out your.acc.mrg --report report.json")
        return True

    except ImportError as e:
        print(f"✗ Import error: {e}")
        print("Make sure you've installed the package (poetry install).")
    except Exception as e:
        print(f"✗ Error: {e}")
    return False


def main() -> int:
    """Main function."""

    print("acc-treekit - Quick Start")
    print("=" * 40)

    if not check_environment_setup():
        print("\n⚠️  Please fix environment configuration before proceeding.")
        return 1

    print("\n" + "=" * 40)
    return 0 if run_sample() else 1


if __name__ == "__main__":
    sys.exit(main())
