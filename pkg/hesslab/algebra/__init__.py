"""Symmetric functions of eigenvalues and their matrix-coordinate counterparts."""

from .symmfunc import (
    sigma, sigma_table, sigma_gradient, sigma_hessian, in_cone, cone_nesting,
    newton_maclaurin_gap, sigma_quotient, rescale, root_gradient,
    esp_table, sigma_batch, gradient_batch, hessian_batch, in_cone_batch,
)
from .spectral import (
    eigen_decompose, jacobi_eigh_batch, f_value, f_gradient_matrix,
    f_second_quadratic_form, f_value_batch, f_gradient_batch, f_second_batch,
)

__all__ = [
    'sigma', 'sigma_table', 'sigma_gradient', 'sigma_hessian', 'in_cone', 'cone_nesting',
    'newton_maclaurin_gap', 'sigma_quotient', 'rescale', 'root_gradient',
    'esp_table', 'sigma_batch', 'gradient_batch', 'hessian_batch', 'in_cone_batch',
    'eigen_decompose', 'jacobi_eigh_batch', 'f_value', 'f_gradient_matrix',
    'f_second_quadratic_form', 'f_value_batch', 'f_gradient_batch', 'f_second_batch',
]
