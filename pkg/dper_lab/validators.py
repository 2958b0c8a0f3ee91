# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals
import math

from django.core.exceptions import ValidationError
from django.core.validators import (
    BaseValidator,
    MaxLengthValidator as _MaxLengthValidator,
    MinLengthValidator as _MinLengthValidator,
)
from django.utils.deconstruct import deconstructible
from django.utils.translation import ngettext_lazy


@deconstructible
class MinValuesValidator(_MinLengthValidator):
    """
    Validates that a delimited flag provided at least ``limit_value`` values
    """

    code = "min_values"
    message = ngettext_lazy(
        "Ensure at least %(limit_value)d value is given (got %(show_value)d).",
        "Ensure at least %(limit_value)d values are given (got %(show_value)d).",
        "limit_value",
    )


@deconstructible
class MaxValuesValidator(_MaxLengthValidator):
    """
    Validates that a delimited flag provided at most ``limit_value`` values
    """

    code = "max_values"
    message = ngettext_lazy(
        "Ensure at most %(limit_value)d value is given (got %(show_value)d).",
        "Ensure at most %(limit_value)d values are given (got %(show_value)d).",
        "limit_value",
    )


@deconstructible
class UniqueValuesValidator(object):
    """
    Validates that no value is repeated, e.g. the same seed twice
    """

    code = "unique_values"
    message = "Values must be unique; repeated: %(repeated)s."

    def __call__(self, values):
        seen, repeated = set(), []
        for v in values:
            if v in seen and v not in repeated:
                repeated.append(v)
            seen.add(v)
        if repeated:
            raise ValidationError(
                self.message,
                code=self.code,
                params={"repeated": ", ".join(str(i) for i in repeated)},
            )

    def __eq__(self, other):
        return isinstance(other, self.__class__)


@deconstructible
class OpenLowerBoundValidator(BaseValidator):
    """
    Validates ``value > limit_value``.

    Django ships only inclusive bounds; rates such as ``gamma``
    and ``tau`` live in the half-open interval ``(0, 1]``.
    """

    code = "min_value_exclusive"
    message = "Ensure this value is greater than %(limit_value)s."

    def compare(self, a, b):
        return not a > b


@deconstructible
class FiniteValidator(object):
    code = "finite"
    message = "Ensure this value is a finite number."

    def __call__(self, value):
        if value is not None and not math.isfinite(value):
            raise ValidationError(self.message, code=self.code)

    def __eq__(self, other):
        return isinstance(other, self.__class__)
