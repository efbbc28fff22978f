"""nfrgauge: evaluate measurable and scalable non-functional requirements."""

__version__ = "0.1.0"
