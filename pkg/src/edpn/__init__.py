"""edpn: Swim Lane Event-Driven Petri Nets for model-based testing of interacting systems."""

__version__ = "0.1.0"
