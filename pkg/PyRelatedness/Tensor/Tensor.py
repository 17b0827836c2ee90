####################################################################################################
#
# PyRelatedness - Semantic relatedness re-ranking for text spotting
# Copyright (C) 2026 PyRelatedness contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#
####################################################################################################

"""This module implements a minimal dense tensor with reverse-mode automatic differentiation.

A :class:`Tensor` wraps a 64-bit Numpy array.  Each differentiable operation (see
:mod:`PyRelatedness.Tensor.Functions`) returns a new tensor which remembers the :class:`Node` that
produced it: the node stores the inputs and the local gradient rule.  A :class:`ComputeGraph` is
the list of nodes reachable from an output, sorted in topological order, the backward pass walks
it in reverse order and visits each node exactly once.

Example of usage::

    x = Tensor([[1., 2.]], requires_grad=True)
    w = Tensor([[3.], [4.]], requires_grad=True)
    y = F.sum(F.relu(F.matmul(x, w)))
    y.backward()
    x.grad  # [[3., 4.]]

Gradients accumulate additively in the :attr:`Tensor.grad` of the leaves, they must be cleared with
:meth:`Tensor.zero_grad` between two optimisation steps.

"""

####################################################################################################

import contextlib
import logging
import threading

import numpy as np

####################################################################################################

_module_logger = logging.getLogger(__name__)

####################################################################################################

DTYPE = np.float64

####################################################################################################

class DimensionError(ValueError):
    pass

####################################################################################################

_state = threading.local()

def is_grad_enabled():
    return getattr(_state, 'grad_enabled', True)

@contextlib.contextmanager
def no_grad():

    """Context manager that disables graph recording, used for inference."""

    previous = is_grad_enabled()
    _state.grad_enabled = False
    try:
        yield
    finally:
        _state.grad_enabled = previous

####################################################################################################

class Node:

    """This class records an operation of the forward pass.

    Public Attributes:

      :attr:`name`
        operation name

      :attr:`inputs`
        input tensors

      :attr:`output`
        output tensor

      :attr:`rule`
        callable mapping the output gradient to a tuple of input gradients, a ``None`` entry means
        the input doesn't receive a gradient

    """

    __slots__ = ('name', 'inputs', 'output', 'rule')

    ##############################################

    def __init__(self, name, inputs, output, rule):
        self.name = name
        self.inputs = tuple(inputs)
        self.output = output
        self.rule = rule

    ##############################################

    def __repr__(self):
        return 'Node {0.name} {1}'.format(self, self.output.shape)

####################################################################################################

class Tensor:

    """This class implements a dense real tensor with an optional gradient slot.

    Public Attributes:

      :attr:`values`
        Numpy array of float64, read-only when the tensor is the output of an operation

      :attr:`grad`
        accumulated gradient, same shape as :attr:`values`, or None

      :attr:`requires_grad`

      :attr:`name`

    """

    ##############################################

    def __init__(self, values, requires_grad=False, name=None):

        values = np.array(values, dtype=DTYPE, copy=True)
        if 0 in values.shape:
            raise DimensionError("Tensor extents must be positive, got {}".format(values.shape))
        self._values = values
        self.grad = None
        self.requires_grad = bool(requires_grad)
        self.name = name
        self._node = None

    ##############################################

    @classmethod
    def _from_operation(cls, values, node_name, inputs, rule):

        """Build the output of an operation and record its node when a gradient is required."""

        obj = cls.__new__(cls)
        values = np.asarray(values, dtype=DTYPE)
        values.flags.writeable = False
        obj._values = values
        obj.grad = None
        obj.name = None
        obj._node = None
        obj.requires_grad = is_grad_enabled() and any(tensor.requires_grad for tensor in inputs)
        if obj.requires_grad:
            obj._node = Node(node_name, inputs, obj, rule)
        return obj

    ##############################################

    @property
    def values(self):
        return self._values

    @property
    def shape(self):
        return tuple(self._values.shape)

    @property
    def ndim(self):
        return self._values.ndim

    @property
    def size(self):
        return self._values.size

    @property
    def node(self):
        return self._node

    @property
    def is_leaf(self):
        return self._node is None

    ##############################################

    def __len__(self):
        return self._values.shape[0]

    def __repr__(self):
        name = ' ' + self.name if self.name else ''
        return '{0.__class__.__name__}{1} {0.shape}\n{0._values}'.format(self, name)

    ##############################################

    def item(self):
        if self._values.size != 1:
            raise DimensionError("item() requires a single value, shape is {}".format(self.shape))
        return float(self._values.reshape(-1)[0])

    def numpy(self):
        return np.array(self._values)

    def detach(self):
        return Tensor(self._values)

    ##############################################

    def zero_grad(self):
        self.grad = None

    ##############################################

    def assign(self, values):

        """Replace in place the values of a leaf tensor, e.g. for an optimiser update."""

        if not self.is_leaf:
            raise ValueError("Cannot assign the output of an operation")
        values = np.asarray(values, dtype=DTYPE)
        if values.shape != self._values.shape:
            raise DimensionError("Cannot assign shape {} to tensor of shape {}".format(values.shape, self.shape))
        self._values[...] = values

    ##############################################

    def accumulate_grad(self, gradient):
        if self.grad is None:
            self.grad = np.array(gradient, dtype=DTYPE)
        else:
            self.grad += gradient

    ##############################################

    def backward(self, seed=None):

        """Run the backward pass from this tensor, the default seed is 1 for a single value tensor."""

        if seed is None:
            if self.size != 1:
                raise DimensionError("A seed is required for non scalar output of shape {}".format(self.shape))
            seed = np.ones(self.shape, dtype=DTYPE)
        return backward(ComputeGraph.from_output(self), seed)

    ##############################################

    # Operator sugar, see Functions for the contracts

    def __add__(self, other):
        from . import Functions as F
        return F.add(self, other)

    def __sub__(self, other):
        from . import Functions as F
        return F.sub(self, other)

    def __mul__(self, other):
        from . import Functions as F
        if isinstance(other, Tensor):
            return F.mul(self, other)
        return F.scale(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        from . import Functions as F
        return F.scale(self, -1.)

    def __matmul__(self, other):
        from . import Functions as F
        return F.matmul(self, other)

    @property
    def T(self):
        from . import Functions as F
        return F.transpose(self)

####################################################################################################

class ComputeGraph:

    """This class implements the acyclic graph of the operations leading to an output.

    The nodes are stored in topological order: the inputs of a node are produced by nodes that
    precede it.
    """

    _logger = _module_logger.getChild('ComputeGraph')

    ##############################################

    def __init__(self, output, nodes):
        self._output = output
        self._nodes = list(nodes)

    ##############################################

    @classmethod
    def from_output(cls, output):

        # Iterative depth first search, a recursive one hits the recursion limit on long LSTM tapes
        nodes = []
        visited = set()
        if output.node is not None:
            stack = [(output.node, False)]
            while stack:
                node, expanded = stack.pop()
                if expanded:
                    nodes.append(node)
                    continue
                if id(node) in visited:
                    continue
                visited.add(id(node))
                stack.append((node, True))
                for tensor in node.inputs:
                    if tensor.node is not None and id(tensor.node) not in visited:
                        stack.append((tensor.node, False))
        cls._logger.debug("Graph with {} nodes".format(len(nodes)))
        return cls(output, nodes)

    ##############################################

    @property
    def output(self):
        return self._output

    @property
    def nodes(self):
        return iter(self._nodes)

    def __len__(self):
        return len(self._nodes)

    ##############################################

    def leaves(self):
        leaves = []
        seen = set()
        for node in self._nodes:
            for tensor in node.inputs:
                if tensor.is_leaf and tensor.requires_grad and id(tensor) not in seen:
                    seen.add(id(tensor))
                    leaves.append(tensor)
        return leaves

####################################################################################################

def backward(graph, seed):

    """Propagate *seed*, the gradient of the graph output, back to the leaves.

    The gradients are accumulated into the :attr:`Tensor.grad` of every leaf requiring a gradient.
    Return a dictionary mapping these leaves to the gradient contributed by this pass.
    """

    output = graph.output
    seed = np.asarray(seed, dtype=DTYPE)
    if seed.shape != output.shape:
        raise DimensionError("Seed shape {} doesn't match output shape {}".format(seed.shape, output.shape))

    contributions = {}

    if output.is_leaf:
        if output.requires_grad:
            output.accumulate_grad(seed)
            contributions[output] = np.array(seed)
        return contributions

    pending = {id(output): seed}
    for node in reversed(graph._nodes):
        gradient = pending.pop(id(node.output), None)
        if gradient is None:
            continue
        input_gradients = node.rule(gradient)
        for tensor, input_gradient in zip(node.inputs, input_gradients):
            if input_gradient is None or not tensor.requires_grad:
                continue
            key = id(tensor)
            if tensor.is_leaf:
                if tensor in contributions:
                    contributions[tensor] = contributions[tensor] + input_gradient
                else:
                    contributions[tensor] = np.array(input_gradient, dtype=DTYPE)
            elif key in pending:
                pending[key] = pending[key] + input_gradient
            else:
                pending[key] = input_gradient

    for tensor, gradient in contributions.items():
        tensor.accumulate_grad(gradient)

    return contributions
