"""Minimal PDF text extraction.

Reads the text layer of uncompressed or Flate-compressed PDFs by walking page
objects in document order and interpreting the text-showing operators (Tj,
TJ, ' and ") of their content streams. This covers report-style PDFs with a
real text layer and standard single-byte encodings. Encrypted files,
image-only scans and exotic encodings are rejected rather than silently
returning garbage; OCR is deliberately out of scope.
"""

from __future__ import annotations

import base64
import re
import zlib

from .errors import UnreadablePdf

_OBJ_RE = re.compile(rb"(\d+)\s+\d+\s+obj\b(.*?)endobj", re.S)
_PAGE_TYPE_RE = re.compile(rb"/Type\s*/Page\b(?!s)")
_CONTENTS_REF_RE = re.compile(rb"/Contents\s+(\d+)\s+\d+\s+R")
_CONTENTS_ARRAY_RE = re.compile(rb"/Contents\s*\[(.*?)\]", re.S)
_REF_RE = re.compile(rb"(\d+)\s+\d+\s+R")

# String escapes inside ( ) literals
_ESCAPES = {
    b"n": b"\n",
    b"r": b"\r",
    b"t": b"\t",
    b"b": b"\b",
    b"f": b"\f",
    b"(": b"(",
    b")": b")",
    b"\\": b"\\",
}


def extract_pdf_text(path: str) -> str:
    """Extract the text layer of a PDF, pages joined by a newline.

    Raises UnreadablePdf for encrypted, corrupt, or image-only files.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.lstrip().startswith(b"%PDF"):
        raise UnreadablePdf(f"{path}: not a PDF file")
    if _is_encrypted(data):
        raise UnreadablePdf(f"{path}: encrypted PDF; decryption is not supported")

    objects = {int(num): body for num, body in _OBJ_RE.findall(data)}
    pages = _page_content_streams(objects)
    if not pages:
        # No parseable page tree; fall back to any stream that contains a
        # text block, in file order.
        pages = [
            [stream]
            for body in objects.values()
            if (stream := _decoded_stream(body)) is not None and b"BT" in stream
        ]

    page_texts = []
    for streams in pages:
        parts = [_content_text(s) for s in streams]
        page_texts.append("".join(parts).strip("\n"))

    text = "\n".join(page_texts)
    if not text.strip():
        raise UnreadablePdf(
            f"{path}: no extractable text layer (image-only PDFs require OCR, which is out of scope)"
        )
    return text


def _is_encrypted(data: bytes) -> bool:
    # /Encrypt lives in the trailer dictionary; checking the tail region
    # avoids false positives on page content.
    tail = data[-4096:]
    return b"/Encrypt" in tail or b"/Encrypt" in data[: data.find(b"stream") if b"stream" in data else len(data)]


def _page_content_streams(objects: dict[int, bytes]) -> list[list[bytes]]:
    """Content streams per page, pages in document order."""
    pages: list[list[bytes]] = []
    for body in objects.values():
        if not _PAGE_TYPE_RE.search(body):
            continue
        refs: list[int] = []
        array = _CONTENTS_ARRAY_RE.search(body)
        if array:
            refs = [int(n) for n in _REF_RE.findall(array.group(1))]
        else:
            ref = _CONTENTS_REF_RE.search(body)
            if ref:
                refs = [int(ref.group(1))]
        streams = []
        for num in refs:
            target = objects.get(num)
            if target is None:
                continue
            stream = _decoded_stream(target)
            if stream is not None:
                streams.append(stream)
        if streams:
            pages.append(streams)
    return pages


_FILTER_RE = re.compile(rb"/Filter\s*(\[[^\]]*\]|/\w+)")
_NAME_RE = re.compile(rb"/(\w+)")


def _decoded_stream(body: bytes) -> bytes | None:
    start = body.find(b"stream")
    if start == -1:
        return None
    payload_start = start + len(b"stream")
    if body[payload_start : payload_start + 2] == b"\r\n":
        payload_start += 2
    elif body[payload_start : payload_start + 1] in (b"\n", b"\r"):
        payload_start += 1
    end = body.rfind(b"endstream")
    if end == -1 or end < payload_start:
        return None
    payload = body[payload_start:end].rstrip(b"\r\n")
    header = body[:start]

    filter_match = _FILTER_RE.search(header)
    if not filter_match:
        return payload
    for name in _NAME_RE.findall(filter_match.group(1)):
        if name == b"ASCII85Decode":
            data = payload.strip()
            if data.endswith(b"~>"):
                data = data[:-2]
            if data.startswith(b"<~"):
                data = data[2:]
            try:
                payload = base64.a85decode(data, ignorechars=b" \t\n\r\x0b")
            except ValueError:
                return None
        elif name == b"ASCIIHexDecode":
            data = payload.strip().rstrip(b">")
            try:
                payload = bytes.fromhex(re.sub(rb"\s", b"", data).decode("ascii"))
            except ValueError:
                return None
        elif name == b"FlateDecode":
            try:
                payload = zlib.decompress(payload)
            except zlib.error:
                return None
        else:
            return None  # unsupported filter (DCT, LZW, ...)
    return payload


def _content_text(stream: bytes) -> str:
    """Interpret text-showing operators of one content stream."""
    out: list[str] = []
    pending: list[bytes] = []  # string operands awaiting their operator
    i = 0
    n = len(stream)
    while i < n:
        c = stream[i : i + 1]
        if c == b"(":
            literal, i = _read_literal(stream, i)
            pending.append(literal)
            continue
        if c == b"<" and stream[i : i + 2] != b"<<":
            hexstr, i = _read_hex(stream, i)
            pending.append(hexstr)
            continue
        if c.isalpha() or c in (b"'", b'"', b"*"):
            j = i
            while j < n and (stream[j : j + 1].isalpha() or stream[j : j + 1] in (b"'", b'"', b"*")):
                j += 1
            op = stream[i:j]
            if op in (b"Tj", b"TJ"):
                out.extend(_decode(s) for s in pending)
            elif op in (b"'", b'"'):
                out.append("\n")
                out.extend(_decode(s) for s in pending)
            elif op in (b"Td", b"TD", b"T*"):
                out.append("\n")
            if op:
                pending.clear()
            i = j if j > i else i + 1
            continue
        if c == b"[" or c == b"]":
            i += 1  # TJ array brackets; numbers between strings are kerning
            continue
        i += 1
    return "".join(out)


def _read_literal(stream: bytes, i: int) -> tuple[bytes, int]:
    """Read a ( ) string literal starting at index i; returns (bytes, next index)."""
    assert stream[i : i + 1] == b"("
    i += 1
    depth = 1
    buf = bytearray()
    n = len(stream)
    while i < n and depth > 0:
        c = stream[i : i + 1]
        if c == b"\\":
            nxt = stream[i + 1 : i + 2]
            if nxt in _ESCAPES:
                buf += _ESCAPES[nxt]
                i += 2
            elif nxt.isdigit():
                octal = stream[i + 1 : i + 4]
                k = 0
                while k < 3 and k < len(octal) and chr(octal[k]).isdigit():
                    k += 1
                buf.append(int(octal[:k], 8) & 0xFF)
                i += 1 + k
            else:
                i += 2  # line continuation or unknown escape
        elif c == b"(":
            depth += 1
            buf += c
            i += 1
        elif c == b")":
            depth -= 1
            if depth > 0:
                buf += c
            i += 1
        else:
            buf += c
            i += 1
    return bytes(buf), i


def _read_hex(stream: bytes, i: int) -> tuple[bytes, int]:
    end = stream.find(b">", i)
    if end == -1:
        return b"", len(stream)
    digits = re.sub(rb"\s", b"", stream[i + 1 : end])
    if len(digits) % 2:
        digits += b"0"
    try:
        return bytes.fromhex(digits.decode("ascii")), end + 1
    except ValueError:
        return b"", end + 1


def _decode(raw: bytes) -> str:
    # Standard fonts in report PDFs are WinAnsi (cp1252); latin-1 is the
    # total fallback so extraction never raises on odd bytes.
    try:
        return raw.decode("cp1252")
    except UnicodeDecodeError:
        return raw.decode("latin-1")
