#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import expanduser, isdir, join
from os import access, makedirs, W_OK
from sys import stdin, stdout
import gzip

from ..engine.errors import ConfigError

"""
    This class wraps opening a file for reading or writing, possibly in a
    Gzipped format if the name says so.

    It is a substitute for argparse.FileType, which doesn't provide automatic
    Gzipping. It is to be instancied and then passed to the "type =" argument
    of "ArgumentParser.add_argument", or called directly.
"""

class FileType:

    """
        :param mode: "r" or "w"
    """

    def __init__(self, mode):

        self.mode = mode

    """
        :param path: A path to the disk, the file will be considered GZipped
            if if ends with ".gz"; "-" stands for stdin or stdout
    """

    def __call__(self, path):

        path = expanduser(path)

        if path == '-':

            return stdin if 'r' in self.mode else stdout

        try:

            if path[-3:] != '.gz':
                return open(path, self.mode, newline = '' if 'w' in self.mode else None)

            return gzip.open(path, self.mode + 't')

        except OSError as exception:

            raise ConfigError('Cannot open "%s": %s' % (path, exception.strerror or exception))

"""
    Output directories are created when missing, and must be writable.
"""

def output_directory(path : str) -> str:

    path = expanduser(path)

    try:
        makedirs(path, exist_ok = True)
    except OSError as exception:
        raise ConfigError('Cannot create the output directory "%s": %s' % (path, exception.strerror or exception))

    if not isdir(path) or not access(path, W_OK):
        raise ConfigError('The output directory "%s" is not writable' % path)

    return path

def open_output(directory : str, name : str):

    return FileType('w')(join(output_directory(directory), name))
