"""Registrable-domain extraction with an embedded public-suffix snapshot.

The full public suffix list is thousands of rules; this snapshot covers the
generic TLDs plus the multi-label and hosted suffixes that show up in
developer browsing. Unknown TLDs fall back to the standard default rule
(last label is the suffix, registrable domain is the last two labels).
"""

from __future__ import annotations

import ipaddress
import re
from urllib.parse import urlsplit


class InvalidUrl(ValueError):
    """Raised when a string is not an absolute http(s)-style URL."""


# Multi-label public suffixes (the one-label generic case is the default
# rule). Includes the commonly seen hosted-platform suffixes from the PSL
# private section, so user sites on those platforms keep their own label.
_MULTI_LABEL_SUFFIXES = frozenset({
    "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "net.uk",
    "com.au", "net.au", "org.au", "edu.au", "gov.au", "id.au",
    "co.jp", "or.jp", "ne.jp", "ac.jp", "go.jp",
    "com.br", "net.br", "org.br",
    "com.cn", "net.cn", "org.cn", "gov.cn", "edu.cn",
    "co.in", "net.in", "org.in", "firm.in", "gen.in",
    "co.nz", "net.nz", "org.nz",
    "co.za", "org.za", "web.za",
    "com.mx", "org.mx", "edu.mx",
    "com.ar", "com.tr", "com.tw", "com.sg", "com.my", "com.hk",
    "co.kr", "or.kr", "co.il", "org.il", "co.th",
    "github.io", "gitlab.io", "bitbucket.io",
    "herokuapp.com", "appspot.com", "blogspot.com", "wordpress.com",
    "netlify.app", "vercel.app", "web.app", "pages.dev", "surge.sh",
    "readthedocs.io", "firebaseapp.com", "azurewebsites.net",
    "cloudfront.net", "s3.amazonaws.com", "fastly.net",
})

_LABEL = re.compile(r"^[a-z0-9_]([a-z0-9_-]*[a-z0-9_])?$")


def _is_hostname(host: str) -> bool:
    if not host or len(host) > 253:
        return False
    return all(_LABEL.match(label) for label in host.split("."))


def registrable_domain(host: str) -> str:
    """Lowercase registrable domain of a hostname (public-suffix aware)."""
    host = host.lower().rstrip(".")
    try:
        ipaddress.ip_address(host)
        return host
    except ValueError:
        pass
    labels = host.split(".")
    if len(labels) < 2:
        return host
    # Longest multi-label suffix wins; try the longest candidates first.
    for take in range(len(labels) - 1, 0, -1):
        suffix = ".".join(labels[-take:])
        if suffix in _MULTI_LABEL_SUFFIXES:
            if take == len(labels):
                return host  # the host *is* a public suffix
            return ".".join(labels[-(take + 1):])
    # Default rule: unknown or generic TLD.
    return ".".join(labels[-2:])


def extract_domain(url: str) -> str:
    """Registrable domain of an absolute URL.

    "https://www.stackoverflow.com/q/1" -> "stackoverflow.com";
    raises InvalidUrl for relative or unparseable inputs.
    """
    if not isinstance(url, str) or not url.strip():
        raise InvalidUrl(f"not a URL: {url!r}")
    try:
        parts = urlsplit(url.strip())
    except ValueError as exc:
        raise InvalidUrl(f"unparseable URL: {url!r}") from exc
    if parts.scheme not in ("http", "https") or not parts.netloc:
        raise InvalidUrl(f"not an absolute http(s) URL: {url!r}")
    host = parts.hostname or ""
    if not host or (not _is_hostname(host) and not _looks_like_ip(host)):
        raise InvalidUrl(f"no usable host in URL: {url!r}")
    return registrable_domain(host)


def _looks_like_ip(host: str) -> bool:
    try:
        ipaddress.ip_address(host)
        return True
    except ValueError:
        return False


def normalize_url(url: str) -> str:
    """Canonical page identity: lowercased scheme and host, fragment dropped."""
    parts = urlsplit(url.strip())
    host = (parts.hostname or "").lower()
    if parts.port is not None:
        host = f"{host}:{parts.port}"
    path = parts.path or "/"
    rebuilt = f"{parts.scheme.lower()}://{host}{path}"
    if parts.query:
        rebuilt += f"?{parts.query}"
    return rebuilt


def normalize_whitelist_entry(domain: str) -> str:
    """Normalize a user-supplied trusted-domain entry to a registrable domain.

    Raises ValueError when the entry is not a plain domain name.
    """
    entry = (domain or "").strip().lower()
    if "://" in entry or "/" in entry or not entry:
        raise ValueError(f"not a domain name: {domain!r}")
    if not _is_hostname(entry) or "." not in entry:
        raise ValueError(f"not a domain name: {domain!r}")
    return registrable_domain(entry)
