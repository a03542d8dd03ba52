__version__ = "0.3.0"
__VERSION__ = __version__
