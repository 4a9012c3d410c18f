"""Category-partition testing toolkit.

Load a specification with :func:`load_spec`, check it with :func:`verify`,
build test frames with :func:`generate_frames` and turn each frame into
concrete inputs with :func:`find_values`.
"""

from .frames import Criterion, FrameSet, TestFrame, generate_frames
from .model import ChoiceRef, CpSpec, load_spec, save_spec
from .solver import Bounds, find_values, make_engine
from .verifier import VerificationReport, verify

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "ChoiceRef",
    "CpSpec",
    "Criterion",
    "FrameSet",
    "TestFrame",
    "VerificationReport",
    "find_values",
    "generate_frames",
    "load_spec",
    "make_engine",
    "save_spec",
    "verify",
    "__version__",
]
