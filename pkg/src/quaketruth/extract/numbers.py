"""Casualty count parsing: digits, separators, magnitude suffixes, words."""

from __future__ import annotations

import re

_GROUPED = re.compile(r"^\d{1,3}(?:,\d{3})+$")
_PLAIN = re.compile(r"^\d+$")
_SUFFIXED = re.compile(r"^(\d+(?:\.\d+)?)\s*([kKmM])$")

_SUFFIX_FACTOR = {"k": 1_000, "m": 1_000_000}

# Direct single-token lookups only; compositional number grammar is out of
# scope for the rule path.
_WORD_NUMBERS: dict[str, int] = {
    # en
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50, "sixty": 60,
    "seventy": 70, "eighty": 80, "ninety": 90, "hundred": 100,
    "thousand": 1000,
    # es
    "cero": 0, "uno": 1, "una": 1, "dos": 2, "tres": 3, "cuatro": 4,
    "cinco": 5, "seis": 6, "siete": 7, "ocho": 8, "nueve": 9, "diez": 10,
    "veinte": 20, "treinta": 30, "cien": 100, "mil": 1000,
    # fr
    "un": 1, "une": 1, "deux": 2, "trois": 3, "quatre": 4, "cinq": 5,
    "sept": 7, "huit": 8, "neuf": 9, "dix": 10, "vingt": 20, "trente": 30,
    "cent": 100, "mille": 1000,
    # zh
    "零": 0, "一": 1, "两": 2, "二": 2, "三": 3, "四": 4, "五": 5, "六": 6,
    "七": 7, "八": 8, "九": 9, "十": 10, "百": 100, "千": 1000, "万": 10000,
}


def parse_count(token: str) -> int | None:
    """Convert one token to a non-negative count, or None if unconvertible.

    Handles plain digits, comma-grouped thousands, k/K and m/M magnitude
    suffixes, and a small word-number table (en/es/fr/zh). Decimals are only
    meaningful with a suffix ("1.5k"); a bare "2.5" is not a count.
    """
    token = token.strip()
    if not token:
        return None
    if _PLAIN.match(token):
        return int(token)
    if _GROUPED.match(token):
        return int(token.replace(",", ""))
    suffixed = _SUFFIXED.match(token)
    if suffixed:
        value = float(suffixed.group(1)) * _SUFFIX_FACTOR[suffixed.group(2).lower()]
        return int(round(value))
    return _WORD_NUMBERS.get(token.casefold())
