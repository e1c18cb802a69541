#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import sys
from esav.Utils.Utils import Singleton


class EsavLogger(metaclass=Singleton):
    """
    Diagnostics of integrations and experiment runs (unconverged fixed-point steps, excluded slope points,
    failed cells) go through EsavLogger().log_message().
    While muted, messages are held back until flush_messages(), so a study reports its warnings
    after the whole result table is written.
    """

    def __init__(self):
        self._is_mute = False
        self._held_messages = []

    def mute(self):
        self._is_mute = True

    def unmute(self):
        self._is_mute = False

    def collected_messages(self):
        """
        :return: the messages held back while muted
        :rtype: list[str]
        """
        return [msg for msg, _ in self._held_messages]

    def log_message(self, msg, file=None, level=None):
        """
        :param str msg: message to log
        :param file: output stream (warnings and errors default to stderr)
        :param str level: (I)nfo, (W)arning or (E)rror
        """
        prefix = {'I': 'Info: ', 'W': 'Warning: ', 'E': 'Error: '}.get(level, '')
        if level in ('W', 'E') and file is None:
            file = sys.stderr
        if self._is_mute:
            self._held_messages.append((prefix + msg, file))
        else:
            print(prefix + msg, file=file)

    def flush_messages(self, silent=False):
        """
        Prints the held-back messages, unless silent, and drops them
        """
        if not silent:
            for msg, file in self._held_messages:
                print(msg, file=file)
        self._held_messages.clear()
