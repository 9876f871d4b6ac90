"""dockhand — manage containers on any number of remote engine hosts.

Commands reach a host through one of three interchangeable transports:
an SSH exec channel, a small HTTP command agent installed on the host,
or a local child process (dev/test only).
"""

__version__ = "0.1.0"
