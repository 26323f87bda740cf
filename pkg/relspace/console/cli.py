# console/cli.py
"""Shared plumbing for the management commands: loading inputs and mapping errors to exit codes."""
from __future__ import annotations

import logging
from contextlib import contextmanager

from django.core.management.base import CommandError

from grammar.lexicon import NOUN, Lexicon, LexiconEntry
from grammar.serializers import read_lexicon
from grammar.types import N
from relations.exceptions import RelspaceError, SceneError, UnknownWord
from spaces.serializers import read_scene

logger = logging.getLogger(__name__)

# exit codes
NOT_ENTAILED = 1
BAD_INPUT = 2
UNKNOWN_WORD = 3
BAD_SCENE = 4


def exit_code(exc: RelspaceError) -> int:
    if isinstance(exc, UnknownWord):
        return UNKNOWN_WORD
    if isinstance(exc, SceneError):
        return BAD_SCENE
    return BAD_INPUT


@contextmanager
def reporting_errors():
    """Re-raise library errors as CommandError carrying the exit code."""
    try:
        yield
    except RelspaceError as exc:
        logger.debug("command failed: %r", exc)
        raise CommandError(str(exc), returncode=exit_code(exc)) from exc


def with_names(lexicon: Lexicon, scene) -> Lexicon:
    """The lexicon plus a proper name for every inhabitant it does not already mention."""
    extra = [LexiconEntry(who, N, NOUN) for who in scene.inhabitants if who not in lexicon]
    return Lexicon(list(lexicon) + extra) if extra else lexicon


def load_inputs(scene_path, lexicon_path):
    scene = read_scene(scene_path) if scene_path else None
    lexicon = read_lexicon(lexicon_path)
    if scene is not None:
        lexicon = with_names(lexicon, scene)
    return scene, lexicon
