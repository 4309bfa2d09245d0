"""reviewforge: pre-submission peer-review simulation.

Converts a manuscript PDF into a hierarchical text summary plus a composite
page image, grounds review generation in retrieved venue reviews, and returns
a structured review with traceable Action:Objective[Locator] to-do items.
"""

__version__ = "0.1.0"

from .config import AppConfig, load_config

__all__ = ["AppConfig", "load_config", "__version__"]
