"""Deterministic CSV and manifest writers."""
import hashlib
import os


def fmt(x):
    """Round-trip representation with 17 significant digits."""
    return format(float(x), ".17g")


def time_tag(t):
    return format(float(t), "g")


def write_csv(path, header, columns):
    """Write equal-length columns under a one-line header."""
    cols = [list(c) for c in columns]
    n = len(cols[0]) if cols else 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(fmt(c[i]) for c in cols) + "\n")


def write_rows(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(x) for x in row) + "\n")


def write_summary(path, items):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in items:
            if isinstance(value, float):
                value = fmt(value)
            fh.write(f"{key} = {value}\n")


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(directory, config_hash, status, backend):
    """List every file under ``directory`` (except the manifest) with its hash."""
    files = []
    for root, _, names in os.walk(directory):
        for nm in names:
            full = os.path.join(root, nm)
            rel = os.path.relpath(full, directory).replace(os.sep, "/")
            if rel != "manifest.txt":
                files.append(rel)
    files.sort()
    with open(os.path.join(directory, "manifest.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"config_sha256 = {config_hash}\n")
        fh.write(f"status = {status}\n")
        fh.write(f"backend = {backend}\n")
        for rel in files:
            fh.write(f"{sha256_file(os.path.join(directory, rel))}  {rel}\n")
