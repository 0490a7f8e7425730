"""Hand-constructed cluster configurations with hand-walked expected labels.

Each case lists components as (speed, back, side, sd_back, sd_side, weight);
speed stddev is fixed at 1.0 (the rules never read it). The expected labels
were walked through the cascade by hand: anchor = highest mean speed (ties
to larger weight, then lower index), then first match among R1 knuckleball,
R2 changeup, R3 two-seam/sinker (same-side catch-all), R4 curveball,
R5 cutter, R6 slider (opposite-side catch-all). Default thresholds: 6 mph
changeup gap, 60 side-spin band, 5 mph cutter gap, 4x knuckleball spin
variance ratio, 0 curveball back-spin max. Base anchor spin variance is
15^2 + 15^2 = 450.
"""

# (case_id, components, expected_labels)
CASCADE_CASES = [
    ("single_cluster",
     [(91, 120, -40, 15, 15, 1.0)],
     ["FourSeam"]),
    ("changeup_classic",  # dspeed 8 > 6, dside 5 < 60, same side
     [(91, 120, -40, 15, 15, 0.5), (83, 60, -45, 15, 15, 0.5)],
     ["FourSeam", "Changeup"]),
    ("sinker_backspin_larger",  # dspeed 2 fails R2; dside 70 < dback 80
     [(91, 120, -40, 15, 15, 0.5), (89, 40, -110, 15, 15, 0.5)],
     ["FourSeam", "Sinker"]),
    ("twoseam_sidespin_larger",  # dside 70 > dback 20
     [(91, 120, -40, 15, 15, 0.5), (89, 100, -110, 15, 15, 0.5)],
     ["FourSeam", "TwoSeam"]),
    ("speed_gap_boundary_not_changeup",  # dspeed exactly 6 is not > 6
     [(91, 120, -40, 15, 15, 0.5), (85, 100, -50, 15, 15, 0.5)],
     ["FourSeam", "Sinker"]),
    ("sidespin_band_boundary_not_changeup",  # dside exactly 60 is not < 60
     [(91, 120, -40, 15, 15, 0.5), (83, 118, -100, 15, 15, 0.5)],
     ["FourSeam", "TwoSeam"]),
    ("knuckleball_wide_spins",  # spin var 3200 > 4*450, slower than anchor
     [(91, 120, -40, 15, 15, 0.5), (68, 30, -5, 40, 40, 0.5)],
     ["FourSeam", "Knuckleball"]),
    ("knuckleball_blocked_equal_speed",  # dspeed 0 blocks R1; R3 tie -> sinker
     [(91, 120, -40, 15, 15, 0.6), (91, 118, -38, 40, 40, 0.4)],
     ["FourSeam", "Sinker"]),
    ("anchor_tie_higher_weight",  # equal speeds: weight 0.7 takes the anchor
     [(91, 100, -60, 15, 15, 0.3), (91, 120, -40, 15, 15, 0.7)],
     ["Sinker", "FourSeam"]),
    ("anchor_tie_lower_index",  # equal speeds and weights: index 0 anchors
     [(91, 120, -40, 15, 15, 0.5), (91, 100, -60, 15, 15, 0.5)],
     ["FourSeam", "Sinker"]),
    ("curveball_topspin_opposite",
     [(91, 120, -40, 15, 15, 0.5), (77, -60, 30, 15, 15, 0.5)],
     ["FourSeam", "Curveball"]),
    ("same_side_topspin_is_changeup",  # R2 fires before any curveball check
     [(91, 120, -40, 15, 15, 0.5), (77, -60, -30, 15, 15, 0.5)],
     ["FourSeam", "Changeup"]),
    ("cutter_fast_opposite",  # dspeed 3 <= 5
     [(91, 120, -40, 15, 15, 0.5), (88, 110, 35, 15, 15, 0.5)],
     ["FourSeam", "Cutter"]),
    ("slider_catchall",  # back spin 60 > 0 blocks R4; dspeed 7 > 5 blocks R5
     [(91, 120, -40, 15, 15, 0.5), (84, 60, 25, 15, 15, 0.5)],
     ["FourSeam", "Slider"]),
    ("slider_topspin_in_gap",  # dspeed 5.5: too small for R4, too big for R5
     [(91, 120, -40, 15, 15, 0.5), (85.5, -10, 25, 15, 15, 0.5)],
     ["FourSeam", "Slider"]),
    ("zero_side_cluster_same_side",
     [(91, 120, -40, 15, 15, 0.5), (83, 100, 0, 15, 15, 0.5)],
     ["FourSeam", "Changeup"]),
    ("zero_side_anchor_same_side",
     [(91, 120, 0, 15, 15, 0.5), (84, 100, 50, 15, 15, 0.5)],
     ["FourSeam", "Changeup"]),
    ("cutter_fast_topspin_opposite",  # top spin but dspeed 3 fails R4's gap
     [(91, 120, -40, 15, 15, 0.5), (88, -20, 30, 15, 15, 0.5)],
     ["FourSeam", "Cutter"]),
    ("knuckleball_ratio_boundary",  # spin var exactly 4x anchor is not >
     [(91, 120, -40, 15, 15, 0.5), (82, 110, -45, 30, 30, 0.5)],
     ["FourSeam", "Changeup"]),
    ("curveball_evolution_pair",
     [(91, 120, -40, 15, 15, 0.4), (77, -60, 30, 15, 15, 0.3),
      (75, -55, 35, 15, 15, 0.3)],
     ["FourSeam", "Curveball", "Curveball"]),
    ("equal_speed_opposite_is_cutter",  # dspeed 0 <= 5
     [(91, 120, -40, 15, 15, 0.6), (91, 120, 40, 15, 15, 0.4)],
     ["FourSeam", "Cutter"]),
    ("five_pitch_repertoire",
     [(91.5, 120, -38, 15, 15, 0.2), (89.2, 62, -62, 15, 15, 0.2),
      (83.2, 82, -44, 15, 15, 0.2), (84.5, 8, 28, 15, 15, 0.2),
      (77.0, -78, 55, 15, 15, 0.2)],
     ["FourSeam", "Sinker", "Changeup", "Slider", "Curveball"]),
    ("sinker_on_exact_spin_tie",  # dside == dback -> sinker branch
     [(91, 120, -40, 15, 15, 0.5), (89, 90, -70, 15, 15, 0.5)],
     ["FourSeam", "Sinker"]),
    ("knuckleball_beats_curveball",  # R1 fires before R4 can
     [(91, 120, -40, 15, 15, 0.5), (70, -30, 20, 40, 40, 0.5)],
     ["FourSeam", "Knuckleball"]),
    ("cutter_gap_boundary",  # dspeed exactly 5 still cutter
     [(91, 120, -40, 15, 15, 0.5), (86, 110, 30, 15, 15, 0.5)],
     ["FourSeam", "Cutter"]),
    ("slider_just_past_cutter_gap",  # dspeed 5.1 > 5
     [(91, 120, -40, 15, 15, 0.5), (85.9, 30, 25, 15, 15, 0.5)],
     ["FourSeam", "Slider"]),
]
