"""Minimal PDF reader for documents with an embedded text layer.

Parses the COS object graph (classic xref tables, xref streams, and object
streams), decodes Flate/ASCII85/ASCIIHex content streams, and interprets the
text operators of each page into positioned spans. Simple (single-byte) fonts
only; CID-keyed fonts and true OCR are out of scope. No external dependencies:
written for this package because no PDF library is available in the target
environment.
"""

from __future__ import annotations

import base64
import logging
import re
import zlib
from dataclasses import dataclass, field
from typing import Any, Optional

from .types import MalformedPdf

logger = logging.getLogger(__name__)

_WHITESPACE = b"\x00\t\n\x0c\r "
_DELIMITERS = b"()<>[]{}/%"

Matrix = tuple[float, float, float, float, float, float]
_IDENTITY: Matrix = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def _mat_mul(m: Matrix, n: Matrix) -> Matrix:
    """Matrix product m x n for row-vector PDF conventions."""
    a, b, c, d, e, f = m
    a2, b2, c2, d2, e2, f2 = n
    return (
        a * a2 + b * c2,
        a * b2 + b * d2,
        c * a2 + d * c2,
        c * b2 + d * d2,
        e * a2 + f * c2 + e2,
        e * b2 + f * d2 + f2,
    )


def _translate(tx: float, ty: float) -> Matrix:
    return (1.0, 0.0, 0.0, 1.0, tx, ty)


@dataclass(frozen=True)
class PdfRef:
    num: int
    gen: int = 0


class PdfName(str):
    """PDF name object; subclass so names stay distinct from decoded strings."""


@dataclass
class PdfStream:
    attrs: dict
    raw: bytes


@dataclass(frozen=True)
class TextSpan:
    """One shown string in device space (PDF points, origin bottom-left)."""

    x: float
    y: float
    size: float
    font: str
    bold: bool
    text: str


@dataclass
class PdfPage:
    number: int  # 1-based
    width: float  # points
    height: float
    spans: list[TextSpan] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Object syntax


def _skip_ws(data: bytes, pos: int) -> int:
    n = len(data)
    while pos < n:
        b = data[pos]
        if b in _WHITESPACE:
            pos += 1
        elif b == 0x25:  # '%' comment to end of line
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _read_word(data: bytes, pos: int) -> tuple[bytes, int]:
    start = pos
    n = len(data)
    while pos < n and data[pos] not in _WHITESPACE and data[pos] not in _DELIMITERS:
        pos += 1
    return data[start:pos], pos


def _parse_literal_string(data: bytes, pos: int) -> tuple[bytes, int]:
    # pos points at the opening '('
    pos += 1
    out = bytearray()
    depth = 1
    n = len(data)
    while pos < n:
        b = data[pos]
        if b == 0x5C:  # backslash
            pos += 1
            if pos >= n:
                break
            e = data[pos]
            if e in b"nrtbf":
                out.append({0x6E: 10, 0x72: 13, 0x74: 9, 0x62: 8, 0x66: 12}[e])
                pos += 1
            elif e in b"()\\":
                out.append(e)
                pos += 1
            elif e in b"\r\n":  # line continuation
                pos += 1
                if e == 0x0D and pos < n and data[pos] == 0x0A:
                    pos += 1
            elif 0x30 <= e <= 0x37:  # octal, up to 3 digits
                oct_digits = bytearray()
                while pos < n and 0x30 <= data[pos] <= 0x37 and len(oct_digits) < 3:
                    oct_digits.append(data[pos])
                    pos += 1
                out.append(int(oct_digits.decode(), 8) & 0xFF)
            else:
                out.append(e)
                pos += 1
        elif b == 0x28:  # '('
            depth += 1
            out.append(b)
            pos += 1
        elif b == 0x29:  # ')'
            depth -= 1
            pos += 1
            if depth == 0:
                return bytes(out), pos
            out.append(b)
        else:
            out.append(b)
            pos += 1
    raise MalformedPdf("unterminated literal string")


def _parse_hex_string(data: bytes, pos: int) -> tuple[bytes, int]:
    end = data.find(b">", pos + 1)
    if end < 0:
        raise MalformedPdf("unterminated hex string")
    hexdigits = re.sub(rb"[^0-9A-Fa-f]", b"", data[pos + 1 : end])
    if len(hexdigits) % 2:
        hexdigits += b"0"
    return bytes.fromhex(hexdigits.decode()), end + 1


def _parse_name(data: bytes, pos: int) -> tuple[PdfName, int]:
    pos += 1  # skip '/'
    start = pos
    n = len(data)
    while pos < n and data[pos] not in _WHITESPACE and data[pos] not in _DELIMITERS:
        pos += 1
    raw = data[start:pos]
    if b"#" in raw:
        raw = re.sub(rb"#([0-9A-Fa-f]{2})", lambda m: bytes.fromhex(m.group(1).decode()), raw)
    return PdfName(raw.decode("latin-1")), pos


_NUMBER_RE = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)")


def parse_value(data: bytes, pos: int) -> tuple[Any, int]:
    """Parse one COS value starting at pos (whitespace allowed before it)."""
    pos = _skip_ws(data, pos)
    if pos >= len(data):
        raise MalformedPdf("unexpected end of data")
    b = data[pos]
    if data.startswith(b"<<", pos):
        return _parse_dict(data, pos)
    if b == 0x3C:  # '<'
        return _parse_hex_string(data, pos)
    if b == 0x28:  # '('
        return _parse_literal_string(data, pos)
    if b == 0x2F:  # '/'
        return _parse_name(data, pos)
    if b == 0x5B:  # '['
        return _parse_array(data, pos)
    if b in b"+-.0123456789":
        return _parse_number_or_ref(data, pos)
    word, newpos = _read_word(data, pos)
    if word == b"true":
        return True, newpos
    if word == b"false":
        return False, newpos
    if word == b"null":
        return None, newpos
    raise MalformedPdf(f"unexpected token {word[:20]!r} at offset {pos}")


def _parse_number_or_ref(data: bytes, pos: int) -> tuple[Any, int]:
    m = _NUMBER_RE.match(data, pos)
    if not m:
        raise MalformedPdf(f"bad number at offset {pos}")
    text, after = m.group(), m.end()
    if b"." in text:
        return float(text), after
    value = int(text)
    # Lookahead for "<gen> R" making this an indirect reference.
    probe = _skip_ws(data, after)
    m2 = re.match(rb"(\d+)", data[probe : probe + 12])
    if m2 and value >= 0:
        after_gen = _skip_ws(data, probe + m2.end())
        if data[after_gen : after_gen + 1] == b"R" and (
            after_gen + 1 >= len(data)
            or data[after_gen + 1] in _WHITESPACE
            or data[after_gen + 1] in _DELIMITERS
        ):
            return PdfRef(value, int(m2.group(1))), after_gen + 1
    return value, after


def _parse_array(data: bytes, pos: int) -> tuple[list, int]:
    pos += 1
    out = []
    while True:
        pos = _skip_ws(data, pos)
        if pos >= len(data):
            raise MalformedPdf("unterminated array")
        if data[pos] == 0x5D:  # ']'
            return out, pos + 1
        value, pos = parse_value(data, pos)
        out.append(value)


def _parse_dict(data: bytes, pos: int) -> tuple[dict, int]:
    pos += 2
    out: dict = {}
    while True:
        pos = _skip_ws(data, pos)
        if data.startswith(b">>", pos):
            return out, pos + 2
        if pos >= len(data) or data[pos] != 0x2F:
            raise MalformedPdf(f"expected name key at offset {pos}")
        key, pos = _parse_name(data, pos)
        value, pos = parse_value(data, pos)
        out[str(key)] = value


# ---------------------------------------------------------------------------
# Stream filters


def _png_unpredict(data: bytes, columns: int, colors: int, bpc: int) -> bytes:
    bpp = max(1, (colors * bpc + 7) // 8)
    stride = (columns * colors * bpc + 7) // 8
    out = bytearray()
    prev = bytearray(stride)
    pos = 0
    while pos + 1 + stride <= len(data) + stride and pos < len(data):
        ft = data[pos]
        row = bytearray(data[pos + 1 : pos + 1 + stride])
        pos += 1 + stride
        for i in range(len(row)):
            left = row[i - bpp] if i >= bpp else 0
            up = prev[i]
            if ft == 0:
                pass
            elif ft == 1:
                row[i] = (row[i] + left) & 0xFF
            elif ft == 2:
                row[i] = (row[i] + up) & 0xFF
            elif ft == 3:
                row[i] = (row[i] + ((left + up) >> 1)) & 0xFF
            elif ft == 4:
                ul = prev[i - bpp] if i >= bpp else 0
                p = left + up - ul
                pa, pb, pc = abs(p - left), abs(p - up), abs(p - ul)
                pred = left if (pa <= pb and pa <= pc) else (up if pb <= pc else ul)
                row[i] = (row[i] + pred) & 0xFF
            else:
                raise MalformedPdf(f"unknown PNG predictor row filter {ft}")
        out.extend(row)
        prev = row
    return bytes(out)


def _apply_filter(name: str, data: bytes, parms: dict) -> Optional[bytes]:
    if name in ("FlateDecode", "Fl"):
        try:
            data = zlib.decompress(data)
        except zlib.error as exc:
            raise MalformedPdf(f"bad Flate stream: {exc}") from exc
        predictor = parms.get("Predictor", 1)
        if predictor and predictor >= 10:
            data = _png_unpredict(
                data,
                int(parms.get("Columns", 1)),
                int(parms.get("Colors", 1)),
                int(parms.get("BitsPerComponent", 8)),
            )
        return data
    if name in ("ASCII85Decode", "A85"):
        cleaned = re.sub(rb"\s", b"", data)
        if cleaned.endswith(b"~>"):
            cleaned = cleaned[:-2]
        return base64.a85decode(cleaned)
    if name in ("ASCIIHexDecode", "AHx"):
        cleaned = re.sub(rb"[^0-9A-Fa-f>]", b"", data)
        return bytes.fromhex(cleaned.rstrip(b">").decode())
    return None  # unsupported filter


# ---------------------------------------------------------------------------
# Document


class PdfDocument:
    """Read-only view over one PDF file's object graph and pages."""

    def __init__(self, data: bytes):
        if not isinstance(data, (bytes, bytearray)):
            raise MalformedPdf("input is not a byte sequence")
        data = bytes(data)
        if not data.lstrip()[:5] == b"%PDF-":
            raise MalformedPdf("missing %PDF header")
        self._data = data
        self._offsets: dict[int, int] = {}
        self._in_objstm: dict[int, tuple[int, int]] = {}  # objnum -> (stream objnum, idx)
        self._cache: dict[int, Any] = {}
        self.trailer: dict = {}
        try:
            self._load_xref()
        except MalformedPdf:
            raise
        except Exception as exc:  # damaged xref: fall back to a full scan
            logger.debug("xref load failed (%s); falling back to object scan", exc)
            self._offsets.clear()
        if not self._offsets and not self._in_objstm:
            self._scan_objects()
        if self.trailer.get("Encrypt") is not None:
            raise MalformedPdf("encrypted PDFs are not supported")
        self._root = self._find_root()

    # -- xref loading

    def _load_xref(self) -> None:
        tail = self._data[-2048:]
        m = None
        for m in re.finditer(rb"startxref\s+(\d+)", tail):
            pass
        if m is None:
            raise ValueError("no startxref")
        offset = int(m.group(1))
        seen: set[int] = set()
        while offset and offset not in seen and 0 <= offset < len(self._data):
            seen.add(offset)
            pos = _skip_ws(self._data, offset)
            if self._data.startswith(b"xref", pos):
                trailer = self._read_xref_table(pos + 4)
            else:
                trailer = self._read_xref_stream(pos)
            if not self.trailer:
                self.trailer = trailer
            else:
                for key, value in trailer.items():
                    self.trailer.setdefault(key, value)
            nxt = trailer.get("Prev")
            offset = int(nxt) if isinstance(nxt, (int, float)) else 0

    def _read_xref_table(self, pos: int) -> dict:
        data = self._data
        while True:
            pos = _skip_ws(data, pos)
            if data.startswith(b"trailer", pos):
                trailer, _ = _parse_dict(data, _skip_ws(data, pos + 7))
                return trailer
            m = re.match(rb"(\d+)\s+(\d+)", data[pos : pos + 40])
            if not m:
                raise ValueError(f"bad xref subsection at {pos}")
            start, count = int(m.group(1)), int(m.group(2))
            pos = _skip_ws(data, pos + m.end())
            for i in range(count):
                entry = data[pos : pos + 20]
                em = re.match(rb"(\d{10})\s+(\d{5})\s+([nf])", entry)
                if not em:
                    raise ValueError(f"bad xref entry at {pos}")
                if em.group(3) == b"n":
                    self._offsets.setdefault(start + i, int(em.group(1)))
                pos += 20 if entry[18:20] in (b"\r\n", b" \n", b" \r") else em.end()
                pos = _skip_ws(data, pos) if i + 1 < count else pos

    def _read_xref_stream(self, pos: int) -> dict:
        obj = self._parse_object_at(pos)
        if not isinstance(obj, PdfStream):
            raise ValueError("startxref does not point at an xref stream")
        attrs = obj.attrs
        decoded = self._decode_stream(obj)
        if decoded is None:
            raise ValueError("xref stream uses an unsupported filter")
        widths = [int(w) for w in attrs.get("W", [])]
        if len(widths) != 3:
            raise ValueError("xref stream missing /W")
        size = int(attrs.get("Size", 0))
        index = attrs.get("Index", [0, size])
        entry_len = sum(widths)
        cursor = 0

        def read_field(raw: bytes, width: int, default: int) -> int:
            return int.from_bytes(raw, "big") if width else default

        for k in range(0, len(index), 2):
            start, count = int(index[k]), int(index[k + 1])
            for i in range(count):
                raw = decoded[cursor : cursor + entry_len]
                cursor += entry_len
                if len(raw) < entry_len:
                    break
                f1 = read_field(raw[: widths[0]], widths[0], 1)
                f2 = read_field(raw[widths[0] : widths[0] + widths[1]], widths[1], 0)
                f3 = read_field(raw[widths[0] + widths[1] :], widths[2], 0)
                objnum = start + i
                if f1 == 1:
                    self._offsets.setdefault(objnum, f2)
                elif f1 == 2:
                    self._in_objstm.setdefault(objnum, (f2, f3))
        return attrs

    def _scan_objects(self) -> None:
        for m in re.finditer(rb"(?m)^\s*(\d+)\s+(\d+)\s+obj\b", self._data):
            self._offsets.setdefault(int(m.group(1)), m.start())
        if not self._offsets:
            raise MalformedPdf("no PDF objects found")
        if not self.trailer:
            tm = None
            for tm in re.finditer(rb"trailer", self._data):
                pass
            if tm is not None:
                try:
                    self.trailer, _ = _parse_dict(
                        self._data, _skip_ws(self._data, tm.end())
                    )
                except Exception:
                    self.trailer = {}

    # -- object access

    def resolve(self, value: Any) -> Any:
        while isinstance(value, PdfRef):
            value = self._get_object(value.num)
        return value

    def _get_object(self, num: int) -> Any:
        if num in self._cache:
            return self._cache[num]
        if num in self._offsets:
            obj = self._parse_object_at(self._offsets[num], expect=num)
        elif num in self._in_objstm:
            obj = self._load_from_objstm(num)
        else:
            obj = None
        self._cache[num] = obj
        return obj

    def _parse_object_at(self, pos: int, expect: Optional[int] = None) -> Any:
        data = self._data
        pos = _skip_ws(data, pos)
        m = re.match(rb"(\d+)\s+(\d+)\s+obj\b", data[pos : pos + 40])
        if not m:
            raise MalformedPdf(f"expected object header at offset {pos}")
        if expect is not None and int(m.group(1)) != expect:
            raise MalformedPdf(
                f"xref points object {expect} at object {m.group(1).decode()}"
            )
        value, after = parse_value(data, pos + m.end())
        after = _skip_ws(data, after)
        if isinstance(value, dict) and data.startswith(b"stream", after):
            start = after + 6
            if data[start : start + 2] == b"\r\n":
                start += 2
            elif data[start : start + 1] in (b"\n", b"\r"):
                start += 1
            length = self.resolve(value.get("Length"))
            if isinstance(length, (int, float)) and length >= 0:
                end = start + int(length)
            else:
                end = data.find(b"endstream", start)
                if end < 0:
                    raise MalformedPdf("unterminated stream")
            raw = data[start:end]
            return PdfStream(value, raw)
        return value

    def _load_from_objstm(self, num: int) -> Any:
        stm_num, idx = self._in_objstm[num]
        stream = self._get_object(stm_num)
        if not isinstance(stream, PdfStream):
            raise MalformedPdf(f"object stream {stm_num} missing")
        decoded = self._decode_stream(stream)
        if decoded is None:
            raise MalformedPdf(f"object stream {stm_num} uses unsupported filter")
        count = int(self.resolve(stream.attrs.get("N", 0)))
        first = int(self.resolve(stream.attrs.get("First", 0)))
        pos = 0
        pairs = []
        for _ in range(count):
            pos = _skip_ws(decoded, pos)
            onum, pos = _parse_number_or_ref(decoded, pos)
            pos = _skip_ws(decoded, pos)
            ooff, pos = _parse_number_or_ref(decoded, pos)
            pairs.append((int(onum), int(ooff)))
        for onum, ooff in pairs:
            if onum == num:
                value, _ = parse_value(decoded, first + ooff)
                return value
        raise MalformedPdf(f"object {num} not found in object stream {stm_num}")

    def _decode_stream(self, stream: PdfStream) -> Optional[bytes]:
        filters = self.resolve(stream.attrs.get("Filter"))
        if filters is None:
            return stream.raw
        if not isinstance(filters, list):
            filters = [filters]
        parms = self.resolve(stream.attrs.get("DecodeParms"))
        if not isinstance(parms, list):
            parms = [parms] * len(filters)
        data = stream.raw
        for name, parm in zip(filters, parms):
            parm = self.resolve(parm) or {}
            out = _apply_filter(str(self.resolve(name)), data, parm)
            if out is None:
                logger.debug("unsupported stream filter %s", name)
                return None
            data = out
        return data

    # -- page tree

    def _find_root(self) -> dict:
        root = self.resolve(self.trailer.get("Root"))
        if isinstance(root, dict) and root.get("Pages") is not None:
            return root
        # Trailer missing or damaged: look for the catalog directly.
        for num in sorted(self._offsets) + sorted(self._in_objstm):
            try:
                obj = self.resolve(self._get_object(num))
            except MalformedPdf:
                continue
            if isinstance(obj, dict) and str(obj.get("Type")) == "Catalog":
                return obj
        raise MalformedPdf("no document catalog found")

    def pages(self) -> list[PdfPage]:
        """Walk the page tree and interpret each page's text content."""
        page_dicts: list[dict] = []

        def walk(node: Any, inherited: dict, depth: int) -> None:
            if depth > 64:
                raise MalformedPdf("page tree too deep")
            node = self.resolve(node)
            if not isinstance(node, dict):
                return
            merged = dict(inherited)
            for key in ("Resources", "MediaBox", "Rotate"):
                if key in node:
                    merged[key] = node[key]
            if str(node.get("Type")) == "Page" or (
                "Kids" not in node and "Contents" in node
            ):
                page = dict(node)
                for key, value in merged.items():
                    page.setdefault(key, value)
                page_dicts.append(page)
                return
            for kid in self.resolve(node.get("Kids")) or []:
                walk(kid, merged, depth + 1)

        walk(self.root_pages(), {}, 0)
        pages = []
        for i, pd in enumerate(page_dicts, start=1):
            box = self.resolve(pd.get("MediaBox")) or [0, 0, 612, 792]
            box = [float(self.resolve(v)) for v in box]
            width, height = abs(box[2] - box[0]), abs(box[3] - box[1])
            spans = self._page_spans(pd)
            pages.append(PdfPage(number=i, width=width, height=height, spans=spans))
        return pages

    def root_pages(self) -> Any:
        pages = self.resolve(self._root.get("Pages"))
        if pages is None:
            raise MalformedPdf("catalog has no page tree")
        return pages

    def _page_spans(self, page: dict) -> list[TextSpan]:
        contents = self.resolve(page.get("Contents"))
        if contents is None:
            return []
        streams = contents if isinstance(contents, list) else [contents]
        chunks = []
        for item in streams:
            item = self.resolve(item)
            if isinstance(item, PdfStream):
                decoded = self._decode_stream(item)
                if decoded is not None:
                    chunks.append(decoded)
        if not chunks:
            return []
        fonts = self._page_fonts(page)
        return _interpret_content(b"\n".join(chunks), fonts)

    def _page_fonts(self, page: dict) -> dict[str, tuple[str, bool]]:
        resources = self.resolve(page.get("Resources")) or {}
        font_dict = self.resolve(resources.get("Font")) or {}
        fonts: dict[str, tuple[str, bool]] = {}
        if isinstance(font_dict, dict):
            for key, ref in font_dict.items():
                font = self.resolve(ref)
                if not isinstance(font, dict):
                    continue
                base = str(self.resolve(font.get("BaseFont", "Unknown")))
                fonts[key] = (base, "Bold" in base or "bold" in base)
        return fonts


# ---------------------------------------------------------------------------
# Content stream interpretation


def _interpret_content(
    content: bytes, fonts: dict[str, tuple[str, bool]]
) -> list[TextSpan]:
    spans: list[TextSpan] = []
    ctm: Matrix = _IDENTITY
    gs_stack: list[tuple[Matrix, str, float, float]] = []
    font_key = ""
    font_size = 0.0
    leading = 0.0
    tm: Matrix = _IDENTITY
    tlm: Matrix = _IDENTITY
    operands: list[Any] = []
    pos = 0
    n = len(content)

    def emit(raw: bytes) -> None:
        nonlocal tm
        trm = _mat_mul(tm, ctm)
        text = raw.decode("cp1252", errors="replace")
        if text:
            base, bold = fonts.get(font_key, ("Unknown", False))
            size = font_size * abs(trm[3]) if trm[3] else font_size
            spans.append(
                TextSpan(x=trm[4], y=trm[5], size=size or font_size, font=base, bold=bold, text=text)
            )
        # Advance the text matrix by an approximate width so that several
        # show operations on one line keep their order; exact glyph metrics
        # are not tracked.
        advance = 0.52 * font_size * len(raw)
        tm = _mat_mul(_translate(advance, 0.0), tm)

    def next_line(tx: float, ty: float) -> None:
        nonlocal tm, tlm
        tlm = _mat_mul(_translate(tx, ty), tlm)
        tm = tlm

    while pos < n:
        pos = _skip_ws(content, pos)
        if pos >= n:
            break
        b = content[pos]
        if b in b"+-.0123456789" or b in b"(<[/":
            try:
                if b == 0x3C and not content.startswith(b"<<", pos):
                    value, pos = _parse_hex_string(content, pos)
                elif b in b"+-.0123456789":
                    m = _NUMBER_RE.match(content, pos)
                    if not m:
                        pos += 1
                        continue
                    txt = m.group()
                    value = float(txt) if b"." in txt else int(txt)
                    pos = m.end()
                else:
                    value, pos = parse_value(content, pos)
            except MalformedPdf:
                break
            operands.append(value)
            continue
        word, pos = _read_word(content, pos)
        if not word:
            pos += 1
            continue
        op = word.decode("latin-1")
        try:
            if op == "q":
                gs_stack.append((ctm, font_key, font_size, leading))
            elif op == "Q":
                if gs_stack:
                    ctm, font_key, font_size, leading = gs_stack.pop()
            elif op == "cm" and len(operands) >= 6:
                m6 = tuple(float(v) for v in operands[-6:])
                ctm = _mat_mul(m6, ctm)  # type: ignore[arg-type]
            elif op == "BT":
                tm = tlm = _IDENTITY
            elif op == "Tf" and len(operands) >= 2:
                font_key = str(operands[-2])
                font_size = float(operands[-1])
            elif op == "TL" and operands:
                leading = float(operands[-1])
            elif op == "Td" and len(operands) >= 2:
                next_line(float(operands[-2]), float(operands[-1]))
            elif op == "TD" and len(operands) >= 2:
                leading = -float(operands[-1])
                next_line(float(operands[-2]), float(operands[-1]))
            elif op == "Tm" and len(operands) >= 6:
                tm = tlm = tuple(float(v) for v in operands[-6:])  # type: ignore[assignment]
            elif op == "T*":
                next_line(0.0, -leading)
            elif op == "Tj" and operands:
                if isinstance(operands[-1], bytes):
                    emit(operands[-1])
            elif op == "'" and operands:
                next_line(0.0, -leading)
                if isinstance(operands[-1], bytes):
                    emit(operands[-1])
            elif op == '"' and len(operands) >= 3:
                next_line(0.0, -leading)
                if isinstance(operands[-1], bytes):
                    emit(operands[-1])
            elif op == "TJ" and operands and isinstance(operands[-1], list):
                parts = bytearray()
                for element in operands[-1]:
                    if isinstance(element, bytes):
                        parts.extend(element)
                    elif isinstance(element, (int, float)) and element < -180:
                        parts.extend(b" ")
                emit(bytes(parts))
            elif op == "BI":
                end = content.find(b"EI", pos)
                pos = n if end < 0 else end + 2
        except (ValueError, TypeError):
            logger.debug("skipping malformed operator %s", op)
        operands = []
    return spans


def open_document(pdf_bytes: bytes) -> PdfDocument:
    """Parse PDF bytes; raises MalformedPdf when the file is not usable."""
    return PdfDocument(pdf_bytes)
