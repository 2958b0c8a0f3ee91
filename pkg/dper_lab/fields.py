# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals

from django import forms

from .validators import MaxValuesValidator, MinValuesValidator, UniqueValuesValidator


class MultipleValuesField(forms.CharField):
    """
    Custom Django field for validating/cleaning multiple
    values given in a single command-line value separated by a delimiter,
    for example ``--k-values 2,3,4,5``.

    Parameters
    ----------
    child : Field, optional
        Another Django form field which cleans each value.
        By default values are cleaned as ``CharField``.
    min_values : int, optional
        Minimum number of values which must be provided.
        By default at least 1 value is required.
    max_values : int, optional
        Maximum number of values which can be provided.
        By default no maximum is enforced.
    unique : bool, optional
        Whether repeated values are rejected.
    many_validators : list, optional
        Additional validators which should be used to validate
        all values once split by the delimiter.
    delimiter : str, optional
        The delimiter by which the value will be split into
        multiple values.
        By default ``,`` is used.
    """

    def __init__(
        self,
        child=None,
        min_values=1,
        max_values=None,
        unique=False,
        many_validators=None,
        delimiter=",",
        *args,
        **kwargs
    ):
        self.child = child or forms.CharField()
        self.delimiter = delimiter

        super(MultipleValuesField, self).__init__(*args, **kwargs)

        self.many_validators = list(many_validators or [])
        if min_values:
            self.many_validators.append(MinValuesValidator(min_values))
        if max_values:
            self.many_validators.append(MaxValuesValidator(max_values))
        if unique:
            self.many_validators.append(UniqueValuesValidator())

    def to_python(self, value):
        """
        Accept values which were already split, as YAML config files
        naturally give lists, by joining them back with the delimiter.
        Scalars such as ``seeds: 3`` in YAML arrive as ``int``.
        """
        if isinstance(value, (list, tuple)):
            # trailing delimiter keeps a one-item list a list
            value = "".join(str(i) + self.delimiter for i in value)
        return super(MultipleValuesField, self).to_python(value)

    def clean(self, value):
        """
        Custom ``clean`` which first validates the value by using
        standard ``CharField`` and if all passes, it applies
        similar validations for each value once its split.
        """
        value = self.to_python(value)
        self.validate(value)
        self.run_validators(value)

        if not value:
            return None

        values = self.many_to_python(value)
        self.many_run_validators(values)

        return values

    def many_to_python(self, value):
        """
        Split the value by using the delimiter and clean each
        piece as per the child field. Blank pieces are ignored
        so ``"2,3,"`` is the same as ``"2,3"``.
        """
        return [
            self.child.clean(i.strip())
            for i in value.split(self.delimiter)
            if i.strip()
        ]

    def many_run_validators(self, values):
        """
        Run each validation from ``many_validators`` for the cleaned values.
        """
        errors = []
        for v in self.many_validators:
            try:
                v(values)
            except forms.ValidationError as e:
                if hasattr(e, "code") and e.code in self.error_messages:
                    e = forms.ValidationError(
                        self.error_messages[e.code], e.code, e.params
                    )
                errors.extend(e.error_list)
        if errors:
            raise forms.ValidationError(errors)


class SeedsField(MultipleValuesField):
    """
    Field for the ``--seeds`` flag.

    A single integer ``N`` means the first ``N`` seeds (``0..N-1``),
    anything with a delimiter is an explicit list of seeds::

        >>> SeedsField().clean("3")
        [0, 1, 2]
        >>> SeedsField().clean("7,11")
        [7, 11]
    """

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("child", forms.IntegerField(min_value=0))
        kwargs.setdefault("unique", True)
        super(SeedsField, self).__init__(*args, **kwargs)

    def many_to_python(self, value):
        if self.delimiter not in value:
            count = forms.IntegerField(min_value=1).clean(value.strip())
            return list(range(count))
        return super(SeedsField, self).many_to_python(value)
