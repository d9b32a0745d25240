from . import provenance

__all__ = ["provenance"]
__version__ = "0.1.0"
