"""Desk-scale Tello drone arena: emulator, vision mission controller, scoring."""

__version__ = "0.1.0"
