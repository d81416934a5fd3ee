#!/usr/bin/env python3
"""Regenerates core/src/unicode_fold_table.inc from Python's unicodedata."""
import sys
import unicodedata

RANGES = [(0x00A0, 0x024F), (0x0370, 0x052F), (0x1E00, 0x1FFF), (0x2000, 0x206F), (0x3000, 0x303F)]


def fold(cp):
    ch = chr(cp)
    cat = unicodedata.category(ch)
    if cat.startswith("P") or cat.startswith("Z"):
        return " "
    if cat.startswith("M"):
        return ""
    decomposed = unicodedata.normalize("NFD", ch)
    stripped = "".join(c for c in decomposed if not unicodedata.category(c).startswith("M"))
    lowered = stripped.lower()
    if lowered == ch:
        return None
    return lowered


def main(out):
    rows = []
    for lo, hi in RANGES:
        for cp in range(lo, hi + 1):
            try:
                unicodedata.name(chr(cp))
            except ValueError:
                continue
            folded = fold(cp)
            if folded is None:
                continue
            encoded = "".join("\\x%02x" % b for b in folded.encode("utf-8"))
            rows.append('    {0x%04X, "%s"},' % (cp, encoded))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("// Generated by tools/gen_unicode_table.py (unicodedata %s). Do not edit.\n" % unicodedata.unidata_version)
        fh.write("// Code point -> lowercased NFD base with combining marks removed; punctuation and\n")
        fh.write("// separators map to a single space.\n")
        fh.write("\n".join(rows))
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "core/src/unicode_fold_table.inc")
