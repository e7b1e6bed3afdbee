"""
Parameter override files.

A config file is a list of ``key = value`` lines (``#`` and ``;`` start
comments, blank lines are ignored) naming fields of a parameter dataclass:

    # half the load conductance
    G = 0.005
    V0 = 120

The file has no section header; it is read through `configparser` under an
implicit default section.
 """

__all__ = ['read_overrides', 'apply_overrides', 'load_params']

import configparser
import dataclasses
import logging

from sparse_ad_library.errors import ConfigError

# Init the logger.
log = logging.getLogger(__name__)

_SECTION = "params"


def read_overrides(path):
    """
    Parse a key=value file into a dict of floats.

    ### Raises:

        **ConfigError** for unreadable files, malformed lines, duplicate keys
        and non-numeric values; the message names the file and the line or key.
    """
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=('#', ';'),
                                       inline_comment_prefixes=('#',), delimiters=('=',))
    # Keep parameter names case sensitive (V0 and v0 differ).
    parser.optionxform = str
    try:
        with open(path, 'r') as f:
            parser.read_string(f"[{_SECTION}]\n" + f.read(), source=str(path))
    except OSError as err:
        raise ConfigError(f"Cannot read config file {path}: {err}") from err
    except configparser.DuplicateOptionError as err:
        # Line numbers are shifted by the injected section header.
        raise ConfigError(f"{path}:{err.lineno - 1}: duplicate key '{err.option}'") from err
    except configparser.Error as err:
        raise ConfigError(f"{path}: malformed line: {err.message.splitlines()[-1].strip()}") from err

    overrides = {}
    for key, text in parser.items(_SECTION):
        try:
            overrides[key] = float(text)
        except ValueError as err:
            raise ConfigError(f"{path}: value of '{key}' is not a number: {text!r}") from err
    return overrides


def apply_overrides(params, overrides, source="overrides"):
    """
    Returns a copy of the dataclass instance `params` with `overrides` applied.

    ### Raises:

        **ConfigError** for keys that are not fields of `params` or values the
        dataclass rejects.
    """
    known = {f.name for f in dataclasses.fields(params)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ConfigError(f"{source}: unknown key(s) {', '.join(unknown)} for "
                          f"{type(params).__name__} (known: {', '.join(sorted(known))})")
    try:
        return dataclasses.replace(params, **overrides)
    except ValueError as err:
        raise ConfigError(f"{source}: {err}") from err


def load_params(params, path=None):
    """ `params` overridden by the file at `path` (unchanged if `path` is None). """
    if path is None:
        return params
    overrides = read_overrides(path)
    log.info(f"Loaded {len(overrides)} parameter override(s) from {path}")
    return apply_overrides(params, overrides, source=str(path))
