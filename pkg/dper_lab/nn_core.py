# -*- coding: utf-8 -*-
"""
Dense numeric core shared by the actor and the critics.

Matrices are plain ``numpy.ndarray`` objects of ``float64``.
The only network shape supported is the fixed three layer
perceptron ``in -> h -> h -> out`` with rectifier hidden units,
which is all TD3 needs, so backpropagation is written out by hand
instead of relying on a general autodiff engine.
"""
from __future__ import absolute_import, division, print_function, unicode_literals
import logging
from collections import OrderedDict

import numpy as np

from .constants import STREAM_NAMES, OutputActivation
from .exceptions import ContractViolation, NonFiniteGradient, NumericError


log = logging.getLogger(__name__)

TENSOR_NAMES = ("W1", "b1", "W2", "b2", "W3", "b3")

INITIALIZER = "uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))"


class Rng(object):
    """
    Explicit, seedable random source.

    Wraps ``numpy.random.Generator`` over the ``PCG64`` bit generator
    whose output stream is identical on all platforms for a given seed.

    Parameters
    ----------
    seed : int, optional
        64-bit seed. Ignored when ``seed_sequence`` is given.
    seed_sequence : SeedSequence, optional
        Already derived seed sequence, used by :meth:`spawn`.
    """

    def __init__(self, seed=0, seed_sequence=None):
        if seed_sequence is None:
            seed_sequence = np.random.SeedSequence(int(seed))
        self.seed_sequence = seed_sequence
        self.generator = np.random.Generator(np.random.PCG64(seed_sequence))

    def __repr__(self):
        return "<{} entropy={} spawn_key={}>".format(
            self.__class__.__name__,
            self.seed_sequence.entropy,
            self.seed_sequence.spawn_key,
        )

    @classmethod
    def streams(cls, seed, names=STREAM_NAMES):
        """
        Derive independent named streams from one master seed.

        Streams are derived in the order of ``names`` so the same
        seed always maps the same name to the same stream.

        Returns
        -------
        OrderedDict
            Mapping of stream name to :class:`.Rng`
        """
        children = np.random.SeedSequence(int(seed)).spawn(len(names))
        return OrderedDict(
            (name, cls(seed_sequence=child)) for name, child in zip(names, children)
        )

    def spawn(self, count):
        return [
            self.__class__(seed_sequence=child)
            for child in self.seed_sequence.spawn(count)
        ]

    def normal(self, shape):
        return self.generator.standard_normal(shape)

    def uniform(self, low, high, shape=None):
        return self.generator.uniform(low, high, shape)

    def random(self, shape=None):
        return self.generator.random(shape)

    def integers(self, low, high, size=None):
        return self.generator.integers(low, high, size)

    def seed(self):
        """
        Draw a fresh seed, for example for an environment reset.
        """
        return int(self.generator.integers(0, 2 ** 31 - 1))


def sample_gaussian(rng, mean, std, shape):
    """
    Draw iid normal entries.

    Standard normal draws are always consumed, even when ``std`` is zero,
    so that the stream position does not depend on the noise scale.
    """
    if std < 0:
        raise ContractViolation(
            "Standard deviation must be non-negative, got {}.".format(std),
            {"std": std},
        )
    return mean + std * rng.normal(shape)


class ParamSet(object):
    """
    Ordered set of the six tensors of a three layer perceptron.

    Both :class:`.MlpParams` and :class:`.Gradients` share this layout
    so optimizers can zip them tensor by tensor.
    """

    def __init__(self, tensors, name=""):
        self.tensors = OrderedDict(
            (k, np.array(tensors[k], dtype=np.float64)) for k in TENSOR_NAMES
        )
        self.name = name

    def __getitem__(self, key):
        return self.tensors[key]

    def __iter__(self):
        return iter(self.tensors)

    def items(self):
        return self.tensors.items()

    @property
    def shapes(self):
        return OrderedDict((k, v.shape) for k, v in self.tensors.items())

    def qualified(self, key):
        return "{}.{}".format(self.name, key) if self.name else key


class MlpParams(ParamSet):
    """
    Weights of the fixed ``in -> h -> h -> out`` perceptron.

    Weight matrices are stored ``(fan_out, fan_in)``: ``W1`` is ``h x in``,
    ``W2`` is ``h x h`` and ``W3`` is ``out x h``.

    Attributes
    ----------
    output_activation : OutputActivation
        ``identity`` for critics, ``tanh`` for actors
    action_bound : float
        Output scale used by the ``tanh`` activation
    version : int
        Incremented on every in-place mutation.
        Forward caches remember it to detect stale use.
    """

    def __init__(
        self,
        tensors,
        output_activation=OutputActivation.identity,
        action_bound=1.0,
        name="",
    ):
        super(MlpParams, self).__init__(tensors, name=name)
        self.output_activation = OutputActivation(output_activation)
        self.action_bound = float(action_bound)
        self.version = 0

        w1, w2, w3 = self["W1"], self["W2"], self["W3"]
        if (
            w2.shape != (w1.shape[0], w1.shape[0])
            or w3.shape[1] != w1.shape[0]
            or self["b1"].shape != (w1.shape[0],)
            or self["b2"].shape != (w2.shape[0],)
            or self["b3"].shape != (w3.shape[0],)
        ):
            raise ContractViolation(
                "Parameter shapes do not chain in -> h -> h -> out: {}".format(
                    dict(self.shapes)
                )
            )
        if self.action_bound <= 0:
            raise ContractViolation("Action bound must be positive.")

    def __setitem__(self, key, value):
        value = np.array(value, dtype=np.float64)
        if value.shape != self.tensors[key].shape:
            raise ContractViolation(
                "Cannot assign {} of shape {} to {}.".format(
                    key, value.shape, self.tensors[key].shape
                )
            )
        self.tensors[key] = value
        self.touch()

    def __repr__(self):
        return "<{} {}{} -> {} -> {} ({})>".format(
            self.__class__.__name__,
            "{} ".format(self.name) if self.name else "",
            self.in_dim,
            self.hidden,
            self.out_dim,
            self.output_activation.value,
        )

    @classmethod
    def initialize(
        cls,
        in_dim,
        out_dim,
        rng,
        hidden=256,
        output_activation=OutputActivation.identity,
        action_bound=1.0,
        name="",
    ):
        """
        Create randomly initialized parameters.

        Every weight and bias is drawn from
        ``uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))``.
        """
        tensors = {}
        for layer, (fan_in, fan_out) in enumerate(
            [(in_dim, hidden), (hidden, hidden), (hidden, out_dim)], 1
        ):
            limit = 1.0 / np.sqrt(fan_in)
            tensors["W{}".format(layer)] = rng.uniform(-limit, limit, (fan_out, fan_in))
            tensors["b{}".format(layer)] = rng.uniform(-limit, limit, (fan_out,))
        return cls(
            tensors,
            output_activation=output_activation,
            action_bound=action_bound,
            name=name,
        )

    @property
    def in_dim(self):
        return self["W1"].shape[1]

    @property
    def hidden(self):
        return self["W1"].shape[0]

    @property
    def out_dim(self):
        return self["W3"].shape[0]

    def touch(self):
        self.version += 1

    def copy(self, name=None):
        return self.__class__(
            self.tensors,
            output_activation=self.output_activation,
            action_bound=self.action_bound,
            name=self.name if name is None else name,
        )


class Gradients(ParamSet):
    @classmethod
    def zeros_like(cls, params, name=None):
        return cls(
            {k: np.zeros_like(v) for k, v in params.items()},
            name=params.name if name is None else name,
        )


class ForwardCache(object):
    """
    Pre and post activations of one forward pass,
    everything :func:`mlp_backward` needs.
    """

    def __init__(self, params, x, z1, h1, z2, h2, z3, out):
        self.owner = id(params)
        self.version = params.version
        self.x = x
        self.z1 = z1
        self.h1 = h1
        self.z2 = z2
        self.h2 = h2
        self.z3 = z3
        self.out = out

    def check(self, params):
        if self.owner != id(params) or self.version != params.version:
            raise ContractViolation(
                "Forward cache does not belong to the current state of {!r}; "
                "run the forward pass again.".format(params)
            )


def _as_matrix(value, cols, what):
    value = np.asarray(value, dtype=np.float64)
    if value.ndim != 2 or value.shape[1] != cols:
        raise ContractViolation(
            "{} must be a matrix with {} columns, got shape {}.".format(
                what, cols, value.shape
            ),
            {"expected_cols": cols, "shape": list(value.shape)},
        )
    return value


def mlp_forward(params, inputs):
    """
    Batched forward pass.

    Parameters
    ----------
    params : MlpParams
        Network to evaluate
    inputs : ndarray
        ``b x in`` matrix

    Returns
    -------
    tuple
        ``(output, cache)`` where output is ``b x out``
    """
    x = _as_matrix(inputs, params.in_dim, "Input")

    z1 = x.dot(params["W1"].T) + params["b1"]
    h1 = np.maximum(z1, 0.0)
    z2 = h1.dot(params["W2"].T) + params["b2"]
    h2 = np.maximum(z2, 0.0)
    z3 = h2.dot(params["W3"].T) + params["b3"]

    if params.output_activation is OutputActivation.tanh:
        out = params.action_bound * np.tanh(z3)
    else:
        out = z3

    if not np.all(np.isfinite(out)):
        raise NumericError(
            "Forward pass through {!r} produced non-finite outputs.".format(params)
        )

    return out, ForwardCache(params, x, z1, h1, z2, h2, z3, out)


def mlp_backward(params, cache, output_grad):
    """
    Exact gradients of ``sum(output * output_grad)``.

    Returns
    -------
    tuple
        ``(grads, input_grad)`` where ``input_grad`` is ``b x in``.
        Feeding a critic's ``input_grad`` as an actor's ``output_grad``
        chains the deterministic policy gradient.
    """
    cache.check(params)
    g = np.asarray(output_grad, dtype=np.float64)
    if g.shape != cache.out.shape:
        raise ContractViolation(
            "Output gradient shape {} does not match output shape {}.".format(
                g.shape, cache.out.shape
            )
        )

    if params.output_activation is OutputActivation.tanh:
        t = np.tanh(cache.z3)
        dz3 = g * params.action_bound * (1.0 - t * t)
    else:
        dz3 = g

    dh2 = dz3.dot(params["W3"])
    dz2 = dh2 * (cache.z2 > 0)
    dh1 = dz2.dot(params["W2"])
    dz1 = dh1 * (cache.z1 > 0)

    grads = Gradients(
        {
            "W3": dz3.T.dot(cache.h2),
            "b3": dz3.sum(axis=0),
            "W2": dz2.T.dot(cache.h1),
            "b2": dz2.sum(axis=0),
            "W1": dz1.T.dot(cache.x),
            "b1": dz1.sum(axis=0),
        },
        name=params.name,
    )
    return grads, dz1.dot(params["W1"])


class AdamState(object):
    """
    Adam moments for one parameter set or for several optimized jointly.

    The twin critics share one state over their concatenated parameters
    so their step counters can never drift apart.

    Parameters
    ----------
    params : MlpParams or sequence of MlpParams
        Parameters whose shapes the moments mirror
    lr : float
        Learning rate
    beta1, beta2 : float
        Exponential decay rates of the first and second moment
    eps : float
        Stabilizer added to the denominator
    """

    def __init__(self, params, lr=3e-4, beta1=0.9, beta2=0.999, eps=1e-8):
        groups = _as_group(params)
        self.m = [Gradients.zeros_like(p) for p in groups]
        self.v = [Gradients.zeros_like(p) for p in groups]
        self.t = 0
        self.lr = float(lr)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)

    def __repr__(self):
        return "<{} t={} lr={} groups={}>".format(
            self.__class__.__name__, self.t, self.lr, len(self.m)
        )


def _as_group(value):
    if isinstance(value, ParamSet):
        return [value]
    return list(value)


def adam_step(params, grads, state):
    """
    One bias-corrected Adam update, applied in place.

    Parameters
    ----------
    params : MlpParams or sequence of MlpParams
    grads : Gradients or sequence of Gradients
        Same structure as ``params``
    state : AdamState
        Built for the same ``params`` structure

    Returns
    -------
    tuple
        ``(params, state)``, the same objects that were passed in
    """
    param_group, grad_group = _as_group(params), _as_group(grads)
    if not len(param_group) == len(grad_group) == len(state.m):
        raise ContractViolation(
            "Adam got {} parameter sets, {} gradient sets and state for {}.".format(
                len(param_group), len(grad_group), len(state.m)
            )
        )

    for p, g in zip(param_group, grad_group):
        for key, value in g.items():
            if value.shape != p[key].shape:
                raise ContractViolation(
                    "Gradient {} has shape {}, parameter has {}.".format(
                        p.qualified(key), value.shape, p[key].shape
                    )
                )
            if not np.all(np.isfinite(value)):
                raise NonFiniteGradient(p.qualified(key))

    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t

    for p, g, m, v in zip(param_group, grad_group, state.m, state.v):
        for key in TENSOR_NAMES:
            m.tensors[key] = state.beta1 * m[key] + (1.0 - state.beta1) * g[key]
            v.tensors[key] = state.beta2 * v[key] + (1.0 - state.beta2) * g[key] * g[key]
            step = state.lr * (m[key] / bc1) / (np.sqrt(v[key] / bc2) + state.eps)
            p.tensors[key] = p[key] - step
        p.touch()

    return params, state


def polyak_update(target, online, tau):
    """
    ``target <- tau * online + (1 - tau) * target`` for every tensor.

    ``tau == 1`` copies exactly and ``tau == 0`` leaves the target untouched.
    """
    if not 0.0 <= tau <= 1.0:
        raise ContractViolation("Polyak rate must be within [0, 1], got {}.".format(tau))
    if tau == 0.0:
        return target
    for key in TENSOR_NAMES:
        if tau == 1.0:
            target.tensors[key] = online[key].copy()
        else:
            target.tensors[key] = tau * online[key] + (1.0 - tau) * target[key]
    target.touch()
    return target
