from .activations import dropout, dropout_backward, leaky_relu, leaky_relu_backward
from .conv import (
    ConvSpec,
    conv2d_backward,
    conv2d_forward,
    conv3d_backward,
    conv3d_forward,
    conv_backward,
    conv_forward,
)
from .losses import cross_entropy, one_hot, softmax
from .normalization import BatchNormCache, batchnorm_backward, batchnorm_forward
from .pooling import (
    MaxPoolCache,
    global_avgpool2d,
    global_avgpool2d_backward,
    maxpool3d_backward,
    maxpool3d_forward,
    maxpool_backward,
    maxpool_forward,
)
