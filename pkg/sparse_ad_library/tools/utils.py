import contextlib
import logging
import os
import sys

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

LOG_FORMAT = "[%(name)s.%(funcName)s():%(lineno)d] - [%(levelname)s] - %(message)s"
LOG_LEVELS = {'debug': logging.DEBUG, 'info': logging.INFO, 'warning': logging.WARNING}


def errPrint(msg):
    sys.stderr.write("%s\n" % msg)
    sys.stderr.flush()


def setup_logging():
    """
    Configure the root logger from the SAD_LOG environment variable
    (debug, info or warning; info by default). Log records go to stderr since
    stdout carries the command output.
    """
    name = os.environ.get('SAD_LOG', 'info').strip().lower()
    level = LOG_LEVELS.get(name)
    logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr,
                        level=level or logging.INFO, force=True)
    if level is None:
        logging.getLogger(__name__).warning(f"Unknown SAD_LOG value '{name}', using 'info'")


def parse_output(target):
    """
    Split an --out value into (kind, path): ``mm:PATH`` selects MatrixMarket,
    anything else is a text file. None means stdout.
    """
    if target is None or target == '-':
        return 'text', None
    if target.startswith('mm:'):
        path = target[3:]
        if not path:
            raise ValueError("--out mm: needs a file name")
        return 'mm', path
    return 'text', target


@contextlib.contextmanager
def open_output(path, binary_output=False):
    """ Yields stdout for `path` None, otherwise the opened file. """
    if path is None:
        yield sys.stdout
        return

    output = os.path.realpath(os.path.expanduser(path))
    with open(output, ('wb' if binary_output else 'w')) as out:
        yield out
