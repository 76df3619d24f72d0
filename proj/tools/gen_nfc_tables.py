#!/usr/bin/env python3
"""Regenerates include/ocrforge/detail/nfc_tables.hpp from Python's unicodedata.

The emitted header carries three tables:
  * canonical combining classes (nonzero entries only),
  * full canonical decompositions (recursively expanded, canonically ordered),
  * primary composite pairs (composition exclusions already applied).

Hangul syllables are handled algorithmically at runtime and are skipped here.
"""

import sys
import unicodedata

HANGUL_BASE = 0xAC00
HANGUL_END = 0xD7A3


def main() -> None:
    ccc = []            # (cp, class)
    decomp = []         # (cp, offset, len)
    pool = []           # uint32 codepoints
    compose = []        # (first, second, composite)

    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        if HANGUL_BASE <= cp <= HANGUL_END:
            continue
        ch = chr(cp)
        klass = unicodedata.combining(ch)
        if klass:
            ccc.append((cp, klass))
        raw = unicodedata.decomposition(ch)
        if raw and not raw.startswith("<"):
            nfd = unicodedata.normalize("NFD", ch)
            decomp.append((cp, len(pool), len(nfd)))
            pool.extend(ord(c) for c in nfd)
            parts = raw.split()
            if len(parts) == 2:
                first, second = (int(p, 16) for p in parts)
                # Round-tripping through NFD/NFC weeds out excluded composites.
                if unicodedata.normalize("NFC", nfd) == ch:
                    compose.append((first, second, cp))

    compose.sort(key=lambda t: (t[0] << 21) | t[1])

    out = sys.stdout
    out.write("// Generated by tools/gen_nfc_tables.py -- do not edit by hand.\n")
    out.write("// Unicode data version: %s\n" % unicodedata.unidata_version)
    out.write("#pragma once\n\n")
    out.write("#include <cstdint>\n\n")
    out.write("namespace ocrforge::detail {\n\n")

    out.write("inline constexpr int kNfcTableCount = %d;\n\n" % len(decomp))

    def emit(name, ctype, values, fmt):
        out.write("inline constexpr %s %s[%d] = {\n" % (ctype, name, len(values)))
        line = []
        for v in values:
            line.append(fmt % v)
            if len(line) == 8:
                out.write("    " + ", ".join(line) + ",\n")
                line = []
        if line:
            out.write("    " + ", ".join(line) + ",\n")
        out.write("};\n\n")

    emit("kCccKey", "uint32_t", [c for c, _ in ccc], "0x%04X")
    emit("kCccVal", "uint8_t", [k for _, k in ccc], "%d")
    emit("kDecompKey", "uint32_t", [c for c, _, _ in decomp], "0x%04X")
    emit("kDecompOffset", "uint16_t", [o for _, o, _ in decomp], "%d")
    emit("kDecompLen", "uint8_t", [n for _, _, n in decomp], "%d")
    emit("kDecompPool", "uint32_t", pool, "0x%04X")
    emit("kComposeKey", "uint64_t", [(f << 21) | s for f, s, _ in compose], "0x%010XULL")
    emit("kComposeVal", "uint32_t", [c for _, _, c in compose], "0x%04X")

    out.write("}  // namespace ocrforge::detail\n")


if __name__ == "__main__":
    main()
