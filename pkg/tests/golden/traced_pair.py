# traced_pair: tensor-network contraction function
# generated by ttc 0.1.0
#
# tensors, in order: A, B
#   network 1: 2 tensors, closed, total 9 multiplications; environments via which_env=1..2
#
# usage: result = traced_pair(tensors, which_net, which_env)
#   tensors: the unique project tensors, ordered as listed above
#   which_net: network to contract (omitted or 0: first valid, here 1)
#   which_env: 0 contracts the network as drawn; M > 0 contracts the
#     single-tensor environment of the M-th tensor (closed networks only)
#
# requires the ncon network contractor.

import numpy as np
from ncon import ncon


def traced_pair(tensors, which_net=0, which_env=0):
    if not which_net:
        which_net = 1
    if which_net == 1:
        A = tensors[0]
        B = tensors[1]
        if which_env == 0:
            return ncon([A, B], [[1, 2, 3, 3], [1, 2]], order=[3, 1, 2])
        if which_env == 1:
            return ncon([B, np.eye(3)], [[-1, -2], [-3, -4]], order=[])
        if which_env == 2:
            return ncon([A], [[-1, -2, 3, 3]], order=[3])
        raise ValueError("which_env must be an integer in 0..2 for network 1")
    raise ValueError("which_net must name one of the defined networks: 1")
