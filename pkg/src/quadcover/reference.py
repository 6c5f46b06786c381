"""Published case-study values used for reproduction checks.

Numbers only; they are the comparison targets of ``quadcover report`` and
the acceptance tests.
"""

CASE_STUDY_VERTICES = ((-200.0, -100.0), (-150.0, 300.0), (150.0, 350.0), (200.0, 30.0))
CASE_STUDY_AREA = 126000.0

AFFINE_ST = (235 / 307, 269 / 307)
SIMILARITY_ST = (47 / 65, 79 / 65)
SIMILARITY_VW = (307 / 325, 144 / 325)

INSCRIBED_AXES = (200.3, 155.2)
INSCRIBED_COVERAGE = 0.7747
CIRCUMSCRIBED_AXES = (294.3, 223.5)
CIRCUMSCRIBED_AREA = 206536.8
CIRCUMSCRIBED_U = 1.610
# printed share of the circumscribed ellipse lying outside Q
CIRCUMSCRIBED_OUTSIDE_PRINTED = 0.3999

TABLE_I = {
    "B": (5.073e-6, -2.291e-6, 4.449e-6, 0.00033, -0.00129, -0.04999),
    "D": (5.058e-6, -1.573e-6, 3.415e-6, 0.00027, -0.00075, -0.22675),
}

# environment -> (H_opt [m], theta [deg], psi [deg])
TABLE_II = {
    "inscribed": {
        "suburban": (116.9, 45.8, 26.1),
        "urban": (335.8, 19.7, 36.5),
        "dense-urban": (456.0, 14.8, 37.7),
        "highrise-urban": (9.5, 85.5, 2.8),
    },
    "circumscribed": {
        "suburban": (173.7, 44.3, 27.3),
        "urban": (501.3, 18.7, 38.0),
        "dense-urban": (653.3, 14.6, 39.0),
        "highrise-urban": (13.3, 85.5, 2.9),
    },
}
