"""Exception hierarchy shared by every layer of the simulator."""


class PeelError(Exception):
    """Base class for all simulator errors."""


# ---------------------------------------------------------------- ISA table

class UnknownMnemonic(PeelError):
    pass


class UnknownOpcode(PeelError):
    pass


class NoMatchingForm(PeelError):
    pass


# ----------------------------------------------------------- assembly layer

class AsmError(PeelError):
    """Source-level diagnostic carrying a 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class AsmSyntaxError(AsmError):
    pass


class DuplicateLabel(AsmError):
    pass


class UndefinedLabel(AsmError):
    pass


class OperandOutOfRange(AsmError):
    pass


class TruncatedInstruction(PeelError):
    pass


class BadObjectFile(PeelError):
    pass


# ------------------------------------------------------------ machine state

class InvalidConfig(PeelError):
    pass


class AddressOutOfRange(PeelError):
    pass


class EndianUnspecified(PeelError):
    pass


class StackOverflow(PeelError):
    pass


class StackUnderflow(PeelError):
    pass


# -------------------------------------------------------------- exec engine

class Fault(PeelError):
    """Execution fault; kills the owning process with a diagnostic.

    `pc` is the RAM byte address of the faulting instruction, `line` the
    source line when the loaded image carries one.
    """

    def __init__(self, message, pc=None, line=None):
        loc = ""
        if pc is not None:
            loc += f" at pc={pc}"
        if line is not None:
            loc += f" (line {line})"
        super().__init__(message + loc)
        self.pc = pc
        self.line = line


class DecodeFault(Fault):
    pass


class DivideByZero(Fault):
    pass


class BadTarget(Fault):
    pass


class SelectionMismatch(Fault):
    pass


class DomainMismatch(Fault):
    pass


class MalformedRow(Fault):
    pass


class UnsupportedForm(Fault):
    pass


# ------------------------------------------------------------------- screen

class BadLayer(PeelError):
    pass


class BadShape(PeelError):
    pass


class BadParameter(PeelError):
    pass


class SizeMismatch(PeelError):
    pass


class UnsupportedGlyph(PeelError):
    pass


# ----------------------------------------------------------------- OS layer

class ImageTooLarge(PeelError):
    pass


class OverlapsExistingEntry(PeelError):
    pass


class IllegalTransition(PeelError):
    pass


class UnknownPid(PeelError):
    pass


# --------------------------------------------------------------- BNF layer

class ExprSyntaxError(PeelError):
    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


class UseBeforeAssign(PeelError):
    pass


# ------------------------------------------------------------ debug service

class ProtocolError(PeelError):
    pass
