"""Deterministic stand-in container engine for hermetic tests."""

from .cli import dispatch
from .state import SEED_STATE, VERSION_STRING, load_state, save_state, seed_state

__all__ = ["SEED_STATE", "VERSION_STRING", "dispatch", "load_state", "save_state", "seed_state"]
