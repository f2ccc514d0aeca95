"""Numerical laboratory for vertical projections in the first Heisenberg group."""

from .core import (UNIT_BALL_VOLUME, Direction, HeisBall, HeisPoint,
                   ball_volume, dilate, gauge_norm, group_inv, group_mul,
                   heis_dist, heis_dist_trunc)
from .projections import (PlanePoint, parabolic_dist, pi_e, pi_xt,
                          pixel_area, plane_embed, project_measure, rho_e)
from .cinematic import (f_d1, f_d2, f_eval, graph_overlap_integral,
                        jet_jacobian, jet_jacobian_absdet, jet_map,
                        rotate_point)
from .duality import (HorizontalLine, LightRay, dual_ray,
                      incident_point_line, incident_point_ray, line_measure,
                      line_of, xray_transform)
from .plates import (ModifiedPlate, Plate, ball_to_modified_plate,
                     center_decomposition, compose_center, direction_bin,
                     plate_to_ball, same_direction_separation)
from .delta_sets import (BallFamily, covering_number, generate, read_family,
                         verify_delta_t_set, write_family)
from .measures import (DiscreteMeasure, GridDensity, augment_to_dim3,
                       heis_convolve, layer_decomposition, rasterize,
                       riesz_energy)

__version__ = "0.1.0"
