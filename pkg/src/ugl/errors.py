"""Error taxonomy shared by the whole package.

Three kinds of failure are distinguished everywhere:

* ``InputError``: the caller handed us something malformed (bad vertex
  indices, an edge set that is not a set of non-edges, a file that does
  not parse).  CLI exit code 2.
* ``ConsistencyError``: the input parses but cannot have come from the
  mathematical object it claims to encode (an essential range that is not
  a covering-family member, a constant tuple request for a formula missing
  from some coordinate graph).  A subclass of ``InputError``; exit code 2.
* ``CapabilityError``: the request is well formed but outside the
  documented bounds of an operation (enumeration past the size cap,
  ultrafilter-style operations over a non-principal family).  Exit code 3.
"""


class InputError(ValueError):
    pass


class ConsistencyError(InputError):
    pass


class CapabilityError(RuntimeError):
    pass
