"""Built-in 8x8 bitmap font for the character-frame instruction.

Hand-drawn 5x7 forms inside an 8x8 cell (columns 5..7 and row 7 left
blank for spacing). Lowercase letters share the uppercase bitmaps. Rows
are returned as 8 integers with bit 7 the leftmost pixel.
"""

_ART = {
    " ": (),
    "!": ("..X..", "..X..", "..X..", "..X..", "..X..", ".....", "..X.."),
    '"': (".X.X.", ".X.X.", ".X.X.", ".....", ".....", ".....", "....."),
    "#": (".X.X.", ".X.X.", "XXXXX", ".X.X.", "XXXXX", ".X.X.", ".X.X."),
    "$": ("..X..", ".XXXX", "X.X..", ".XXX.", "..X.X", "XXXX.", "..X.."),
    "%": ("XX..X", "XX.X.", "...X.", "..X..", ".X...", ".X.XX", "X..XX"),
    "&": (".XX..", "X..X.", "X.X..", ".X...", "X.X.X", "X..X.", ".XX.X"),
    "'": ("..X..", "..X..", "..X..", ".....", ".....", ".....", "....."),
    "(": ("...X.", "..X..", ".X...", ".X...", ".X...", "..X..", "...X."),
    ")": (".X...", "..X..", "...X.", "...X.", "...X.", "..X..", ".X..."),
    "*": (".....", ".X.X.", "..X..", "XXXXX", "..X..", ".X.X.", "....."),
    "+": (".....", "..X..", "..X..", "XXXXX", "..X..", "..X..", "....."),
    ",": (".....", ".....", ".....", ".....", "..XX.", "..X..", ".X..."),
    "-": (".....", ".....", ".....", "XXXXX", ".....", ".....", "....."),
    ".": (".....", ".....", ".....", ".....", ".....", ".XX..", ".XX.."),
    "/": ("....X", "...X.", "..X..", "..X..", ".X...", "X....", "....."),
    "0": (".XXX.", "X...X", "X..XX", "X.X.X", "XX..X", "X...X", ".XXX."),
    "1": ("..X..", ".XX..", "..X..", "..X..", "..X..", "..X..", ".XXX."),
    "2": (".XXX.", "X...X", "....X", "..XX.", ".X...", "X....", "XXXXX"),
    "3": (".XXX.", "X...X", "....X", "..XX.", "....X", "X...X", ".XXX."),
    "4": ("...X.", "..XX.", ".X.X.", "X..X.", "XXXXX", "...X.", "...X."),
    "5": ("XXXXX", "X....", "XXXX.", "....X", "....X", "X...X", ".XXX."),
    "6": (".XXX.", "X....", "XXXX.", "X...X", "X...X", "X...X", ".XXX."),
    "7": ("XXXXX", "....X", "...X.", "..X..", ".X...", ".X...", ".X..."),
    "8": (".XXX.", "X...X", "X...X", ".XXX.", "X...X", "X...X", ".XXX."),
    "9": (".XXX.", "X...X", "X...X", ".XXXX", "....X", "X...X", ".XXX."),
    ":": (".....", ".XX..", ".XX..", ".....", ".XX..", ".XX..", "....."),
    ";": (".....", ".XX..", ".XX..", ".....", ".XX..", "..X..", ".X..."),
    "<": ("...X.", "..X..", ".X...", "X....", ".X...", "..X..", "...X."),
    "=": (".....", ".....", "XXXXX", ".....", "XXXXX", ".....", "....."),
    ">": (".X...", "..X..", "...X.", "....X", "...X.", "..X..", ".X..."),
    "?": (".XXX.", "X...X", "....X", "..XX.", "..X..", ".....", "..X.."),
    "@": (".XXX.", "X...X", "X.XXX", "X.XXX", "X.XX.", "X....", ".XXXX"),
    "A": (".XXX.", "X...X", "X...X", "XXXXX", "X...X", "X...X", "X...X"),
    "B": ("XXXX.", "X...X", "X...X", "XXXX.", "X...X", "X...X", "XXXX."),
    "C": (".XXX.", "X...X", "X....", "X....", "X....", "X...X", ".XXX."),
    "D": ("XXXX.", "X...X", "X...X", "X...X", "X...X", "X...X", "XXXX."),
    "E": ("XXXXX", "X....", "X....", "XXXX.", "X....", "X....", "XXXXX"),
    "F": ("XXXXX", "X....", "X....", "XXXX.", "X....", "X....", "X...."),
    "G": (".XXX.", "X...X", "X....", "X.XXX", "X...X", "X...X", ".XXXX"),
    "H": ("X...X", "X...X", "X...X", "XXXXX", "X...X", "X...X", "X...X"),
    "I": (".XXX.", "..X..", "..X..", "..X..", "..X..", "..X..", ".XXX."),
    "J": ("..XXX", "...X.", "...X.", "...X.", "...X.", "X..X.", ".XX.."),
    "K": ("X...X", "X..X.", "X.X..", "XX...", "X.X..", "X..X.", "X...X"),
    "L": ("X....", "X....", "X....", "X....", "X....", "X....", "XXXXX"),
    "M": ("X...X", "XX.XX", "X.X.X", "X.X.X", "X...X", "X...X", "X...X"),
    "N": ("X...X", "XX..X", "X.X.X", "X..XX", "X...X", "X...X", "X...X"),
    "O": (".XXX.", "X...X", "X...X", "X...X", "X...X", "X...X", ".XXX."),
    "P": ("XXXX.", "X...X", "X...X", "XXXX.", "X....", "X....", "X...."),
    "Q": (".XXX.", "X...X", "X...X", "X...X", "X.X.X", "X..X.", ".XX.X"),
    "R": ("XXXX.", "X...X", "X...X", "XXXX.", "X.X..", "X..X.", "X...X"),
    "S": (".XXXX", "X....", "X....", ".XXX.", "....X", "....X", "XXXX."),
    "T": ("XXXXX", "..X..", "..X..", "..X..", "..X..", "..X..", "..X.."),
    "U": ("X...X", "X...X", "X...X", "X...X", "X...X", "X...X", ".XXX."),
    "V": ("X...X", "X...X", "X...X", "X...X", "X...X", ".X.X.", "..X.."),
    "W": ("X...X", "X...X", "X...X", "X.X.X", "X.X.X", "XX.XX", "X...X"),
    "X": ("X...X", "X...X", ".X.X.", "..X..", ".X.X.", "X...X", "X...X"),
    "Y": ("X...X", "X...X", ".X.X.", "..X..", "..X..", "..X..", "..X.."),
    "Z": ("XXXXX", "....X", "...X.", "..X..", ".X...", "X....", "XXXXX"),
    "[": (".XXX.", ".X...", ".X...", ".X...", ".X...", ".X...", ".XXX."),
    "\\": ("X....", ".X...", "..X..", "..X..", "...X.", "....X", "....."),
    "]": (".XXX.", "...X.", "...X.", "...X.", "...X.", "...X.", ".XXX."),
    "^": ("..X..", ".X.X.", "X...X", ".....", ".....", ".....", "....."),
    "_": (".....", ".....", ".....", ".....", ".....", ".....", "XXXXX"),
    "`": (".X...", "..X..", "...X.", ".....", ".....", ".....", "....."),
    "{": ("...XX", "..X..", "..X..", ".X...", "..X..", "..X..", "...XX"),
    "|": ("..X..", "..X..", "..X..", "..X..", "..X..", "..X..", "..X.."),
    "}": ("XX...", "..X..", "..X..", "...X.", "..X..", "..X..", "XX..."),
    "~": (".....", ".X...", "X.X.X", "...X.", ".....", ".....", "....."),
}


def _rows(art) -> tuple:
    rows = []
    for line in art:
        bits = 0
        for col, ch in enumerate(line):
            if ch != ".":
                bits |= 0x80 >> col
        rows.append(bits)
    while len(rows) < 8:
        rows.append(0)
    return tuple(rows)


GLYPHS = {ord(ch): _rows(art) for ch, art in _ART.items()}
for _c in range(ord("a"), ord("z") + 1):
    GLYPHS[_c] = GLYPHS[_c - 32]

PRINTABLE = range(32, 127)


def glyph(code: int) -> tuple:
    """8 row bitmaps for one printable ASCII code (KeyError otherwise)."""
    return GLYPHS[code]
