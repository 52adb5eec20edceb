class ValidationError(ValueError):
    """Bad input: malformed files, out-of-contract arguments. CLI exit code 2."""


class DomainError(RuntimeError):
    """Valid input, but the requested result does not exist (infeasible design,
    operation above self-resonance, ...). CLI exit code 1."""
