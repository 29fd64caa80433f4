"""
Settings for the deblurring app are all namespaced in the OGS_DEBLUR setting.

Example usage in settings.py:

OGS_DEBLUR = {
    "LAMBDA2": 500.0,
    "GROUP_SIZE": 3,
    "DEFAULT_PARAMS_HOOK": "project.deblur.noise_schedule",
}

This module provides the `deblur_settings` object, that is used to access
deblurring settings, checking for user settings first, then falling
back to the defaults.
"""

from django.conf import settings
from django.test.signals import setting_changed
from django.utils.module_loading import import_string

DEFAULTS = {
    # ADMM penalty weights and dual step
    "LAMBDA1": 1.0,
    "LAMBDA2": 500.0,
    "LAMBDA3": 1.0,
    "GAMMA": 1.618,
    # Restart factor of the accelerated solver
    "ETA": 0.999,
    # Overlapping groups
    "GROUP_SIZE": 3,
    "EPS_GROUP": 1e-10,
    # Inner majorization-minimization loop
    "MM_TOL": 1e-3,
    "MM_MAX_ITER": 5,
    # Outer loop
    "TOL": 1e-5,
    "MAX_ITER": 500,
    # Metrics
    "SSIM_K1": 0.01,
    "SSIM_K2": 0.03,
    # Worker threads used by the sweep command
    "SWEEP_WORKERS": 1,
    # Callable mapping a noise level to (mu, p)
    "DEFAULT_PARAMS_HOOK": "django_ogs_deblur.solvers.default_params",
}


# List of settings that may be in string import notation.
IMPORT_STRINGS = [
    "DEFAULT_PARAMS_HOOK",
]


def perform_import(val, setting_name):
    """
    If the given setting is a string import notation,
    then perform the necessary import.
    """
    if val is None:
        return None

    if isinstance(val, str):
        return import_from_string(val, setting_name)

    return val


def import_from_string(val, setting_name):
    """
    Attempt to import a callable from a string representation.
    """
    try:
        return import_string(val)
    except ImportError as exc:
        raise ImportError(
            "Could not import '%s' for OGS deblur setting '%s'. %s: %s."
            % (val, setting_name, exc.__class__.__name__, exc)
        ) from exc


class DeblurSettings:
    """
    A settings object that allows deblurring settings to be accessed as
    properties. For example:

        from django_ogs_deblur.settings import deblur_settings
        print(deblur_settings.LAMBDA2)

    Any setting with string import paths will be automatically resolved
    and return the callable, rather than the string literal.
    """

    def __init__(self, user_settings=None, defaults=None, import_strings=None):
        if user_settings is not None:
            self._user_settings = user_settings
        self.defaults = defaults or DEFAULTS
        self.import_strings = import_strings or IMPORT_STRINGS
        self._cached_attrs = set()

    @property
    def user_settings(self):
        if not hasattr(self, "_user_settings"):
            self._user_settings = getattr(settings, "OGS_DEBLUR", {})
        return self._user_settings

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError(f"Invalid OGS deblur setting: '{attr}'")

        try:
            # Check if present in user settings
            val = self.user_settings[attr]
        except KeyError:
            # Fall back to defaults
            val = self.defaults[attr]

        # Coerce import strings into callables
        if attr in self.import_strings:
            val = perform_import(val, attr)

        # Cache the result
        self._cached_attrs.add(attr)
        setattr(self, attr, val)
        return val

    def reload(self):
        for attr in self._cached_attrs:
            delattr(self, attr)
        self._cached_attrs.clear()
        if hasattr(self, "_user_settings"):
            delattr(self, "_user_settings")


deblur_settings = DeblurSettings(None, DEFAULTS, IMPORT_STRINGS)


def reload_deblur_settings(*args, **kwargs):
    if kwargs["setting"] == "OGS_DEBLUR":
        deblur_settings.reload()


setting_changed.connect(reload_deblur_settings)
