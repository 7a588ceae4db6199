"""foliascan: structured-light depth recovery, surface foliation and
impedance-controlled probe scanning simulation."""

__version__ = "0.1.0"
