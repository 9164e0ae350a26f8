"""Exception taxonomy shared by all modules.

The CLI maps these to exit codes: InputError -> 2, RefusalError -> 3,
InconsistencyError -> 4.
"""


class InputError(ValueError):
    """Malformed input or violated operation precondition."""


class RefusalError(RuntimeError):
    """Operation refused: an enumeration bound would be exceeded, or the
    instance falls on a known-intractable branch."""


class InconsistencyError(RuntimeError):
    """Two methods that must agree produced different answers, or an oracle
    returned values no genuine count/Shapley oracle could produce."""
