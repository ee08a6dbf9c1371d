"""Binary cache for Cayley balls.

Layout: an 8-byte magic, a 32-byte SHA-256 of everything after it, then a
4-byte header length, a JSON header and the raw little-endian arrays.  The
hash covers the header and the payload, so any flipped byte is rejected.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .ball import CayleyBall
from .oracles import make_oracle
from .presentation import GroupPresentation

MAGIC = b"RBALL\x00\x01\n"
CACHE_VERSION = 1


class CacheError(RuntimeError):
    pass


def _presentation_header(p: GroupPresentation) -> dict:
    return {
        "symbols": list(p.symbols),
        "inverse": list(p.inverse),
        "relators": [list(r) for r in p.relators],
        "oracle": p.oracle_hint,
        "table": p.table_path,
        "name": p.name,
    }


def ball_bytes(ball: CayleyBall) -> bytes:
    lengths = np.fromiter((len(w) for w in ball.words), dtype=np.int64, count=ball.size)
    flat = np.fromiter((x for w in ball.words for x in w), dtype=np.int16, count=int(lengths.sum()))
    header = {
        "version": CACHE_VERSION,
        "kind": "ball",
        "radius": ball.radius,
        "presentation": _presentation_header(ball.presentation),
        "oracle_kind": ball.oracle_kind,
        "elements": ball.size,
        "letters": int(flat.size),
    }
    head = json.dumps(header, sort_keys=True).encode()
    body = (struct.pack("<I", len(head)) + head
            + ball.offsets.astype("<i8").tobytes()
            + flat.astype("<i2").tobytes()
            + ball.mul.astype("<i4").tobytes())
    return MAGIC + hashlib.sha256(body).digest() + body


def content_hash(ball: CayleyBall) -> str:
    return hashlib.sha256(ball_bytes(ball)[len(MAGIC) + 32:]).hexdigest()


def save_cache(ball: CayleyBall, path: str | Path) -> str:
    """Write atomically; returns the content hash recorded in dependent reports."""
    data = ball_bytes(ball)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
    return data[len(MAGIC):len(MAGIC) + 32].hex()


def load_cache(path: str | Path, attach_oracle: bool = True) -> CayleyBall:
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC[:5]):
        raise CacheError("not a ball cache file")
    if data[:len(MAGIC)] != MAGIC:
        raise CacheError("cache version mismatch")
    digest, body = data[len(MAGIC):len(MAGIC) + 32], data[len(MAGIC) + 32:]
    if hashlib.sha256(body).digest() != digest:
        raise CacheError("cache hash mismatch")
    (hlen,) = struct.unpack("<I", body[:4])
    header = json.loads(body[4:4 + hlen])
    if header.get("version") != CACHE_VERSION or header.get("kind") != "ball":
        raise CacheError("cache version mismatch")
    ph = header["presentation"]
    pres = GroupPresentation(tuple(ph["symbols"]), tuple(ph["inverse"]),
                             tuple(tuple(r) for r in ph["relators"]), ph["oracle"], ph["table"], ph["name"])
    r, n, m = header["radius"], header["elements"], header["letters"]
    pos = 4 + hlen
    offsets = np.frombuffer(body, dtype="<i8", count=r + 2, offset=pos).astype(np.int64)
    pos += 8 * (r + 2)
    flat = np.frombuffer(body, dtype="<i2", count=m, offset=pos).tolist()
    pos += 2 * m
    mul = np.frombuffer(body, dtype="<i4", count=n * pres.rank, offset=pos).astype(np.int32).reshape(n, pres.rank)
    words = []
    i = 0
    for k in range(r + 1):
        for _ in range(int(offsets[k + 1] - offsets[k])):
            words.append(tuple(flat[i:i + k]))
            i += k
    ball = CayleyBall(pres, r, words, offsets, mul, header["oracle_kind"])
    if attach_oracle:
        try:
            ball.oracle = make_oracle(pres)
        except (OSError, ValueError):
            ball.oracle = None
    return ball
