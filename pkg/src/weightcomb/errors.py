"""Exception taxonomy.

Every invariant the library enforces has a dedicated error so that a sweep
can tell a usage mistake from a genuine counterexample to one of the
structural claims being machine-checked.
"""


class WeightCombError(Exception):
    """Base class for all library errors."""


class NonGenericWeight(WeightCombError):
    """The s-involution was requested for an all-0 or all-(p-1) weight."""


class GenericityError(WeightCombError):
    """A base tuple entry left the admissible band [1, p-3]."""


class LengthMismatch(WeightCombError):
    """Two tuples of different lengths were combined."""


class RangeError(WeightCombError):
    """An index or tuple entry left its documented range."""


class ParityError(WeightCombError):
    """The pre-halving sum of the exponent polynomial was odd."""


class CyclicityViolation(WeightCombError):
    """A chain of extensions failed to exist or to close into a loop."""


class MultiplicityViolation(WeightCombError):
    """Socle or cosocle weights of a spliced module collided."""


class PairingViolation(WeightCombError):
    """The character pairing of the invariant basis is not a bijection."""


class NotASocleWeight(WeightCombError):
    """Lookup of a summand by a weight that is not in the socle."""


class MissingLambda(WeightCombError):
    """A scalar was requested at an index outside the stored window."""


class ZeroStartVector(WeightCombError):
    """Saturation was started from the zero vector."""


class Infeasible(WeightCombError):
    """No admissible residue choice exists (counting bound violated)."""
