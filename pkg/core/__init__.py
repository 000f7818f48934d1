# SqueezeLab core: numerics kernels, config, errors
