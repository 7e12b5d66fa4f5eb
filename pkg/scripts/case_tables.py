"""Raw test-system tables in MATPOWER-style units.

bus rows:    (id, type, Pd_MW, Qd_MVAr, Gs_MW, Bs_MVAr, Vm_pu, Va_deg, base_kV)
             type: 1 PQ, 2 PV, 3 slack. Vm/Va carry the published solved
             operating point and double as warm-start data.
gen rows:    (bus, Pg_MW, Qmax_MVAr, Qmin_MVAr)   Vg taken from the bus row.
branch rows: (from, to, r, x, b, rateA_MVA, ratio)  ratio 0 = line.
"""

IEEE14_BUS = [
    (1, 3, 0.0, 0.0, 0, 0.0, 1.060, 0.00, 138),
    (2, 2, 21.7, 12.7, 0, 0.0, 1.045, -4.98, 138),
    (3, 2, 94.2, 19.0, 0, 0.0, 1.010, -12.72, 138),
    (4, 1, 47.8, -3.9, 0, 0.0, 1.019, -10.33, 138),
    (5, 1, 7.6, 1.6, 0, 0.0, 1.020, -8.78, 138),
    (6, 2, 11.2, 7.5, 0, 0.0, 1.070, -14.22, 69),
    (7, 1, 0.0, 0.0, 0, 0.0, 1.062, -13.37, 69),
    (8, 2, 0.0, 0.0, 0, 0.0, 1.090, -13.36, 69),
    (9, 1, 29.5, 16.6, 0, 19.0, 1.056, -14.94, 69),
    (10, 1, 9.0, 5.8, 0, 0.0, 1.051, -15.10, 69),
    (11, 1, 3.5, 1.8, 0, 0.0, 1.057, -14.79, 69),
    (12, 1, 6.1, 1.6, 0, 0.0, 1.055, -15.07, 69),
    (13, 1, 13.5, 5.8, 0, 0.0, 1.050, -15.16, 69),
    (14, 1, 14.9, 5.0, 0, 0.0, 1.036, -16.04, 69),
]
IEEE14_GEN = [
    (1, 232.4, 10.0, 0.0),
    (2, 40.0, 50.0, -40.0),
    (3, 0.0, 40.0, 0.0),
    (6, 0.0, 24.0, -6.0),
    (8, 0.0, 24.0, -6.0),
]
IEEE14_BRANCH = [
    (1, 2, 0.01938, 0.05917, 0.0528, 0, 0.0),
    (1, 5, 0.05403, 0.22304, 0.0492, 0, 0.0),
    (2, 3, 0.04699, 0.19797, 0.0438, 0, 0.0),
    (2, 4, 0.05811, 0.17632, 0.0340, 0, 0.0),
    (2, 5, 0.05695, 0.17388, 0.0346, 0, 0.0),
    (3, 4, 0.06701, 0.17103, 0.0128, 0, 0.0),
    (4, 5, 0.01335, 0.04211, 0.0000, 0, 0.0),
    (4, 7, 0.00000, 0.20912, 0.0000, 0, 0.978),
    (4, 9, 0.00000, 0.55618, 0.0000, 0, 0.969),
    (5, 6, 0.00000, 0.25202, 0.0000, 0, 0.932),
    (6, 11, 0.09498, 0.19890, 0.0000, 0, 0.0),
    (6, 12, 0.12291, 0.25581, 0.0000, 0, 0.0),
    (6, 13, 0.06615, 0.13027, 0.0000, 0, 0.0),
    (7, 8, 0.00000, 0.17615, 0.0000, 0, 0.0),
    (7, 9, 0.00000, 0.11001, 0.0000, 0, 0.0),
    (9, 10, 0.03181, 0.08450, 0.0000, 0, 0.0),
    (9, 14, 0.12711, 0.27038, 0.0000, 0, 0.0),
    (10, 11, 0.08205, 0.19207, 0.0000, 0, 0.0),
    (12, 13, 0.22092, 0.19988, 0.0000, 0, 0.0),
    (13, 14, 0.17093, 0.34802, 0.0000, 0, 0.0),
]

IEEE30_BUS = [
    (1, 3, 0.0, 0.0, 0, 0.0, 1.060, 0.0, 132),
    (2, 2, 21.7, 12.7, 0, 0.0, 1.043, 0.0, 132),
    (3, 1, 2.4, 1.2, 0, 0.0, 1.0, 0.0, 132),
    (4, 1, 7.6, 1.6, 0, 0.0, 1.0, 0.0, 132),
    (5, 2, 94.2, 19.0, 0, 0.0, 1.010, 0.0, 132),
    (6, 1, 0.0, 0.0, 0, 0.0, 1.0, 0.0, 132),
    (7, 1, 22.8, 10.9, 0, 0.0, 1.0, 0.0, 132),
    (8, 2, 30.0, 30.0, 0, 0.0, 1.010, 0.0, 132),
    (9, 1, 0.0, 0.0, 0, 0.0, 1.0, 0.0, 1),
    (10, 1, 5.8, 2.0, 0, 19.0, 1.0, 0.0, 33),
    (11, 2, 0.0, 0.0, 0, 0.0, 1.082, 0.0, 11),
    (12, 1, 11.2, 7.5, 0, 0.0, 1.0, 0.0, 33),
    (13, 2, 0.0, 0.0, 0, 0.0, 1.071, 0.0, 11),
    (14, 1, 6.2, 1.6, 0, 0.0, 1.0, 0.0, 33),
    (15, 1, 8.2, 2.5, 0, 0.0, 1.0, 0.0, 33),
    (16, 1, 3.5, 1.8, 0, 0.0, 1.0, 0.0, 33),
    (17, 1, 9.0, 5.8, 0, 0.0, 1.0, 0.0, 33),
    (18, 1, 3.2, 0.9, 0, 0.0, 1.0, 0.0, 33),
    (19, 1, 9.5, 3.4, 0, 0.0, 1.0, 0.0, 33),
    (20, 1, 2.2, 0.7, 0, 0.0, 1.0, 0.0, 33),
    (21, 1, 17.5, 11.2, 0, 0.0, 1.0, 0.0, 33),
    (22, 1, 0.0, 0.0, 0, 0.0, 1.0, 0.0, 33),
    (23, 1, 3.2, 1.6, 0, 0.0, 1.0, 0.0, 33),
    (24, 1, 8.7, 6.7, 0, 4.3, 1.0, 0.0, 33),
    (25, 1, 0.0, 0.0, 0, 0.0, 1.0, 0.0, 33),
    (26, 1, 3.5, 2.3, 0, 0.0, 1.0, 0.0, 33),
    (27, 1, 0.0, 0.0, 0, 0.0, 1.0, 0.0, 33),
    (28, 1, 0.0, 0.0, 0, 0.0, 1.0, 0.0, 132),
    (29, 1, 2.4, 0.9, 0, 0.0, 1.0, 0.0, 33),
    (30, 1, 10.6, 1.9, 0, 0.0, 1.0, 0.0, 33),
]
IEEE30_GEN = [
    (1, 260.2, 10.0, 0.0),
    (2, 40.0, 50.0, -40.0),
    (5, 0.0, 40.0, -40.0),
    (8, 0.0, 40.0, -10.0),
    (11, 0.0, 24.0, -6.0),
    (13, 0.0, 24.0, -6.0),
]
IEEE30_BRANCH = [
    (1, 2, 0.0192, 0.0575, 0.0528, 130, 0.0),
    (1, 3, 0.0452, 0.1652, 0.0408, 130, 0.0),
    (2, 4, 0.0570, 0.1737, 0.0368, 65, 0.0),
    (3, 4, 0.0132, 0.0379, 0.0084, 130, 0.0),
    (2, 5, 0.0472, 0.1983, 0.0418, 130, 0.0),
    (2, 6, 0.0581, 0.1763, 0.0374, 65, 0.0),
    (4, 6, 0.0119, 0.0414, 0.0090, 90, 0.0),
    (5, 7, 0.0460, 0.1160, 0.0204, 70, 0.0),
    (6, 7, 0.0267, 0.0820, 0.0170, 130, 0.0),
    (6, 8, 0.0120, 0.0420, 0.0090, 32, 0.0),
    (6, 9, 0.0, 0.2080, 0.0, 65, 0.978),
    (6, 10, 0.0, 0.5560, 0.0, 32, 0.969),
    (9, 11, 0.0, 0.2080, 0.0, 65, 0.0),
    (9, 10, 0.0, 0.1100, 0.0, 65, 0.0),
    (4, 12, 0.0, 0.2560, 0.0, 65, 0.932),
    (12, 13, 0.0, 0.1400, 0.0, 65, 0.0),
    (12, 14, 0.1231, 0.2559, 0.0, 32, 0.0),
    (12, 15, 0.0662, 0.1304, 0.0, 32, 0.0),
    (12, 16, 0.0945, 0.1987, 0.0, 32, 0.0),
    (14, 15, 0.2210, 0.1997, 0.0, 16, 0.0),
    (16, 17, 0.0824, 0.1923, 0.0, 16, 0.0),
    (15, 18, 0.1070, 0.2185, 0.0, 16, 0.0),
    (18, 19, 0.0639, 0.1292, 0.0, 16, 0.0),
    (19, 20, 0.0340, 0.0680, 0.0, 32, 0.0),
    (10, 20, 0.0936, 0.2090, 0.0, 32, 0.0),
    (10, 17, 0.0324, 0.0845, 0.0, 32, 0.0),
    (10, 21, 0.0348, 0.0749, 0.0, 32, 0.0),
    (10, 22, 0.0727, 0.1499, 0.0, 32, 0.0),
    (21, 22, 0.0116, 0.0236, 0.0, 32, 0.0),
    (15, 23, 0.1000, 0.2020, 0.0, 16, 0.0),
    (22, 24, 0.1150, 0.1790, 0.0, 16, 0.0),
    (23, 24, 0.1320, 0.2700, 0.0, 16, 0.0),
    (24, 25, 0.1885, 0.3292, 0.0, 16, 0.0),
    (25, 26, 0.2544, 0.3800, 0.0, 16, 0.0),
    (25, 27, 0.1093, 0.2087, 0.0, 16, 0.0),
    (28, 27, 0.0, 0.3960, 0.0, 65, 0.968),
    (27, 29, 0.2198, 0.4153, 0.0, 16, 0.0),
    (27, 30, 0.3202, 0.6027, 0.0, 16, 0.0),
    (29, 30, 0.2399, 0.4533, 0.0, 16, 0.0),
    (8, 28, 0.0636, 0.2000, 0.0428, 32, 0.0),
    (6, 28, 0.0169, 0.0599, 0.0130, 32, 0.0),
]

IEEE118_BUS = [
    (1, 2, 51, 27, 0, 0, 0.955, 10.67, 138),
    (2, 1, 20, 9, 0, 0, 0.971, 11.22, 138),
    (3, 1, 39, 10, 0, 0, 0.968, 11.56, 138),
    (4, 2, 39, 12, 0, 0, 0.998, 15.28, 138),
    (5, 1, 0, 0, 0, -40, 1.002, 15.73, 138),
    (6, 2, 52, 22, 0, 0, 0.990, 13.00, 138),
    (7, 1, 19, 2, 0, 0, 0.989, 12.56, 138),
    (8, 2, 28, 0, 0, 0, 1.015, 20.77, 345),
    (9, 1, 0, 0, 0, 0, 1.043, 28.02, 345),
    (10, 2, 0, 0, 0, 0, 1.050, 35.61, 345),
    (11, 1, 70, 23, 0, 0, 0.985, 12.72, 138),
    (12, 2, 47, 10, 0, 0, 0.990, 12.20, 138),
    (13, 1, 34, 16, 0, 0, 0.968, 11.35, 138),
    (14, 1, 14, 1, 0, 0, 0.984, 11.50, 138),
    (15, 2, 90, 30, 0, 0, 0.970, 11.23, 138),
    (16, 1, 25, 10, 0, 0, 0.984, 11.91, 138),
    (17, 1, 11, 3, 0, 0, 0.995, 13.74, 138),
    (18, 2, 60, 34, 0, 0, 0.973, 11.53, 138),
    (19, 2, 45, 25, 0, 0, 0.963, 11.05, 138),
    (20, 1, 18, 3, 0, 0, 0.958, 11.93, 138),
    (21, 1, 14, 8, 0, 0, 0.959, 13.52, 138),
    (22, 1, 10, 5, 0, 0, 0.970, 16.08, 138),
    (23, 1, 7, 3, 0, 0, 1.000, 21.00, 138),
    (24, 2, 13, 0, 0, 0, 0.992, 20.89, 138),
    (25, 2, 0, 0, 0, 0, 1.050, 27.93, 138),
    (26, 2, 0, 0, 0, 0, 1.015, 29.71, 345),
    (27, 2, 71, 13, 0, 0, 0.968, 15.35, 138),
    (28, 1, 17, 7, 0, 0, 0.962, 13.62, 138),
    (29, 1, 24, 4, 0, 0, 0.963, 12.63, 138),
    (30, 1, 0, 0, 0, 0, 0.986, 18.79, 345),
    (31, 2, 43, 27, 0, 0, 0.967, 12.75, 138),
    (32, 2, 59, 23, 0, 0, 0.964, 14.80, 138),
    (33, 1, 23, 9, 0, 0, 0.972, 10.63, 138),
    (34, 2, 59, 26, 0, 14, 0.986, 11.30, 138),
    (35, 1, 33, 9, 0, 0, 0.981, 10.87, 138),
    (36, 2, 31, 17, 0, 0, 0.980, 10.87, 138),
    (37, 1, 0, 0, 0, -25, 0.992, 11.77, 138),
    (38, 1, 0, 0, 0, 0, 0.962, 16.91, 345),
    (39, 1, 27, 11, 0, 0, 0.970, 8.41, 138),
    (40, 2, 66, 23, 0, 0, 0.970, 7.35, 138),
    (41, 1, 37, 10, 0, 0, 0.967, 6.92, 138),
    (42, 2, 96, 23, 0, 0, 0.985, 8.53, 138),
    (43, 1, 18, 7, 0, 0, 0.978, 11.28, 138),
    (44, 1, 16, 8, 0, 10, 0.985, 13.82, 138),
    (45, 1, 53, 22, 0, 10, 0.987, 15.67, 138),
    (46, 2, 28, 10, 0, 10, 1.005, 18.49, 138),
    (47, 1, 34, 0, 0, 0, 1.017, 20.73, 138),
    (48, 1, 20, 11, 0, 15, 1.021, 19.93, 138),
    (49, 2, 87, 30, 0, 0, 1.025, 20.94, 138),
    (50, 1, 17, 4, 0, 0, 1.001, 18.90, 138),
    (51, 1, 17, 8, 0, 0, 0.967, 16.28, 138),
    (52, 1, 18, 5, 0, 0, 0.957, 15.32, 138),
    (53, 1, 23, 11, 0, 0, 0.946, 14.35, 138),
    (54, 2, 113, 32, 0, 0, 0.955, 15.26, 138),
    (55, 2, 63, 22, 0, 0, 0.952, 14.97, 138),
    (56, 2, 84, 18, 0, 0, 0.954, 15.16, 138),
    (57, 1, 12, 3, 0, 0, 0.971, 16.36, 138),
    (58, 1, 12, 3, 0, 0, 0.959, 15.51, 138),
    (59, 2, 277, 113, 0, 0, 0.985, 19.37, 138),
    (60, 1, 78, 3, 0, 0, 0.993, 23.15, 138),
    (61, 2, 0, 0, 0, 0, 0.995, 24.04, 138),
    (62, 2, 77, 14, 0, 0, 0.998, 23.43, 138),
    (63, 1, 0, 0, 0, 0, 0.969, 22.75, 345),
    (64, 1, 0, 0, 0, 0, 0.984, 24.52, 345),
    (65, 2, 0, 0, 0, 0, 1.005, 27.65, 345),
    (66, 2, 39, 18, 0, 0, 1.050, 27.48, 138),
    (67, 1, 28, 7, 0, 0, 1.020, 24.84, 138),
    (68, 1, 0, 0, 0, 0, 1.003, 27.55, 345),
    (69, 3, 0, 0, 0, 0, 1.035, 30.00, 138),
    (70, 2, 66, 20, 0, 0, 0.984, 22.58, 138),
    (71, 1, 0, 0, 0, 0, 0.987, 22.15, 138),
    (72, 2, 12, 0, 0, 0, 0.980, 20.98, 138),
    (73, 2, 6, 0, 0, 0, 0.991, 21.94, 138),
    (74, 2, 68, 27, 0, 12, 0.958, 21.64, 138),
    (75, 1, 47, 11, 0, 0, 0.967, 22.91, 138),
    (76, 2, 68, 36, 0, 0, 0.943, 21.77, 138),
    (77, 2, 61, 28, 0, 0, 1.006, 26.72, 138),
    (78, 1, 71, 26, 0, 0, 1.003, 26.42, 138),
    (79, 1, 39, 32, 0, 20, 1.009, 26.72, 138),
    (80, 2, 130, 26, 0, 0, 1.040, 28.96, 138),
    (81, 1, 0, 0, 0, 0, 0.997, 28.10, 345),
    (82, 1, 54, 27, 0, 20, 0.989, 27.24, 138),
    (83, 1, 20, 10, 0, 10, 0.985, 28.42, 138),
    (84, 1, 11, 7, 0, 0, 0.980, 30.95, 138),
    (85, 2, 24, 15, 0, 0, 0.985, 32.51, 138),
    (86, 1, 21, 10, 0, 0, 0.987, 31.14, 138),
    (87, 2, 0, 0, 0, 0, 1.015, 31.40, 161),
    (88, 1, 48, 10, 0, 0, 0.987, 35.64, 138),
    (89, 2, 0, 0, 0, 0, 1.005, 39.69, 138),
    (90, 2, 163, 42, 0, 0, 0.985, 33.29, 138),
    (91, 2, 10, 0, 0, 0, 0.980, 33.31, 138),
    (92, 2, 65, 10, 0, 0, 0.990, 33.80, 138),
    (93, 1, 12, 7, 0, 0, 0.987, 30.79, 138),
    (94, 1, 30, 16, 0, 0, 0.991, 28.64, 138),
    (95, 1, 42, 31, 0, 0, 0.981, 27.67, 138),
    (96, 1, 38, 15, 0, 0, 0.993, 27.51, 138),
    (97, 1, 15, 9, 0, 0, 1.011, 27.88, 138),
    (98, 1, 34, 8, 0, 0, 1.024, 27.40, 138),
    (99, 2, 42, 0, 0, 0, 1.010, 27.04, 138),
    (100, 2, 37, 18, 0, 0, 1.017, 28.03, 138),
    (101, 1, 22, 15, 0, 0, 0.993, 29.61, 138),
    (102, 1, 5, 3, 0, 0, 0.991, 32.30, 138),
    (103, 2, 23, 16, 0, 0, 1.001, 24.44, 138),
    (104, 2, 38, 25, 0, 0, 0.971, 21.69, 138),
    (105, 2, 31, 26, 0, 20, 0.965, 20.57, 138),
    (106, 1, 43, 16, 0, 0, 0.962, 20.32, 138),
    (107, 2, 50, 12, 0, 6, 0.952, 17.53, 138),
    (108, 1, 2, 1, 0, 0, 0.967, 19.38, 138),
    (109, 1, 8, 3, 0, 0, 0.967, 18.93, 138),
    (110, 2, 39, 30, 0, 6, 0.973, 18.09, 138),
    (111, 2, 0, 0, 0, 0, 0.980, 19.74, 138),
    (112, 2, 68, 13, 0, 0, 0.975, 14.99, 138),
    (113, 2, 6, 0, 0, 0, 0.993, 13.74, 138),
    (114, 1, 8, 3, 0, 0, 0.960, 14.46, 138),
    (115, 1, 22, 7, 0, 0, 0.960, 14.46, 138),
    (116, 2, 184, 0, 0, 0, 1.005, 27.12, 138),
    (117, 1, 20, 8, 0, 0, 0.974, 10.67, 138),
    (118, 1, 33, 15, 0, 0, 0.949, 21.92, 138),
]
IEEE118_GEN = [
    (1, 0, 15, -5),
    (4, 0, 300, -300),
    (6, 0, 50, -13),
    (8, 0, 300, -300),
    (10, 450, 200, -147),
    (12, 85, 120, -35),
    (15, 0, 30, -10),
    (18, 0, 50, -16),
    (19, 0, 24, -8),
    (24, 0, 300, -300),
    (25, 220, 140, -47),
    (26, 314, 1000, -1000),
    (27, 0, 300, -300),
    (31, 7, 300, -300),
    (32, 0, 42, -14),
    (34, 0, 24, -8),
    (36, 0, 24, -8),
    (40, 0, 300, -300),
    (42, 0, 300, -300),
    (46, 19, 100, -100),
    (49, 204, 210, -85),
    (54, 48, 300, -300),
    (55, 0, 23, -8),
    (56, 0, 15, -8),
    (59, 155, 180, -60),
    (61, 160, 300, -100),
    (62, 0, 20, -20),
    (65, 391, 200, -67),
    (66, 392, 200, -67),
    (69, 516.4, 300, -300),
    (70, 0, 32, -10),
    (72, 0, 100, -100),
    (73, 0, 100, -100),
    (74, 0, 9, -6),
    (76, 0, 23, -8),
    (77, 0, 70, -20),
    (80, 477, 280, -165),
    (85, 0, 23, -8),
    (87, 4, 1000, -100),
    (89, 607, 300, -210),
    (90, 0, 300, -300),
    (91, 0, 100, -100),
    (92, 0, 9, -3),
    (99, 0, 100, -100),
    (100, 252, 155, -50),
    (103, 40, 40, -15),
    (104, 0, 23, -8),
    (105, 0, 23, -8),
    (107, 0, 200, -200),
    (110, 0, 23, -8),
    (111, 36, 1000, -100),
    (112, 0, 1000, -100),
    (113, 0, 200, -100),
    (116, 0, 1000, -1000),
]
IEEE118_BRANCH = [
    (1, 2, 0.0303, 0.0999, 0.0254, 0, 0.0),
    (1, 3, 0.0129, 0.0424, 0.01082, 0, 0.0),
    (4, 5, 0.00176, 0.00798, 0.0021, 0, 0.0),
    (3, 5, 0.0241, 0.108, 0.0284, 0, 0.0),
    (5, 6, 0.0119, 0.054, 0.01426, 0, 0.0),
    (6, 7, 0.00459, 0.0208, 0.0055, 0, 0.0),
    (8, 9, 0.00244, 0.0305, 1.162, 0, 0.0),
    (8, 5, 0.0, 0.0267, 0.0, 0, 0.985),
    (9, 10, 0.00258, 0.0322, 1.23, 0, 0.0),
    (4, 11, 0.0209, 0.0688, 0.01748, 0, 0.0),
    (5, 11, 0.0203, 0.0682, 0.01738, 0, 0.0),
    (11, 12, 0.00595, 0.0196, 0.00502, 0, 0.0),
    (2, 12, 0.0187, 0.0616, 0.01572, 0, 0.0),
    (3, 12, 0.0484, 0.16, 0.0406, 0, 0.0),
    (7, 12, 0.00862, 0.034, 0.00874, 0, 0.0),
    (11, 13, 0.02225, 0.0731, 0.01876, 0, 0.0),
    (12, 14, 0.0215, 0.0707, 0.01816, 0, 0.0),
    (13, 15, 0.0744, 0.2444, 0.06268, 0, 0.0),
    (14, 15, 0.0595, 0.195, 0.0502, 0, 0.0),
    (12, 16, 0.0212, 0.0834, 0.0214, 0, 0.0),
    (15, 17, 0.0132, 0.0437, 0.0444, 0, 0.0),
    (16, 17, 0.0454, 0.1801, 0.0466, 0, 0.0),
    (17, 18, 0.0123, 0.0505, 0.01298, 0, 0.0),
    (18, 19, 0.01119, 0.0493, 0.01142, 0, 0.0),
    (19, 20, 0.0252, 0.117, 0.0298, 0, 0.0),
    (15, 19, 0.012, 0.0394, 0.0101, 0, 0.0),
    (20, 21, 0.0183, 0.0849, 0.0216, 0, 0.0),
    (21, 22, 0.0209, 0.097, 0.0246, 0, 0.0),
    (22, 23, 0.0342, 0.159, 0.0404, 0, 0.0),
    (23, 24, 0.0135, 0.0492, 0.0498, 0, 0.0),
    (23, 25, 0.0156, 0.08, 0.0864, 0, 0.0),
    (26, 25, 0.0, 0.0382, 0.0, 0, 0.96),
    (25, 27, 0.0318, 0.163, 0.1764, 0, 0.0),
    (27, 28, 0.01913, 0.0855, 0.0216, 0, 0.0),
    (28, 29, 0.0237, 0.0943, 0.0238, 0, 0.0),
    (30, 17, 0.0, 0.0388, 0.0, 0, 0.96),
    (8, 30, 0.00431, 0.0504, 0.514, 0, 0.0),
    (26, 30, 0.00799, 0.086, 0.908, 0, 0.0),
    (17, 31, 0.0474, 0.1563, 0.0399, 0, 0.0),
    (29, 31, 0.0108, 0.0331, 0.0083, 0, 0.0),
    (23, 32, 0.0317, 0.1153, 0.1173, 0, 0.0),
    (31, 32, 0.0298, 0.0985, 0.0251, 0, 0.0),
    (27, 32, 0.0229, 0.0755, 0.01926, 0, 0.0),
    (15, 33, 0.038, 0.1244, 0.03194, 0, 0.0),
    (19, 34, 0.0752, 0.247, 0.0632, 0, 0.0),
    (35, 36, 0.00224, 0.0102, 0.00268, 0, 0.0),
    (35, 37, 0.011, 0.0497, 0.01318, 0, 0.0),
    (33, 37, 0.0415, 0.142, 0.0366, 0, 0.0),
    (34, 36, 0.00871, 0.0268, 0.00568, 0, 0.0),
    (34, 37, 0.00256, 0.0094, 0.00984, 0, 0.0),
    (38, 37, 0.0, 0.0375, 0.0, 0, 0.935),
    (37, 39, 0.0321, 0.106, 0.027, 0, 0.0),
    (37, 40, 0.0593, 0.168, 0.042, 0, 0.0),
    (30, 38, 0.00464, 0.054, 0.422, 0, 0.0),
    (39, 40, 0.0184, 0.0605, 0.01552, 0, 0.0),
    (40, 41, 0.0145, 0.0487, 0.01222, 0, 0.0),
    (40, 42, 0.0555, 0.183, 0.0466, 0, 0.0),
    (41, 42, 0.041, 0.135, 0.0344, 0, 0.0),
    (43, 44, 0.0608, 0.2454, 0.06068, 0, 0.0),
    (34, 43, 0.0413, 0.1681, 0.04226, 0, 0.0),
    (44, 45, 0.0224, 0.0901, 0.0224, 0, 0.0),
    (45, 46, 0.04, 0.1356, 0.0332, 0, 0.0),
    (46, 47, 0.038, 0.127, 0.0316, 0, 0.0),
    (46, 48, 0.0601, 0.189, 0.0472, 0, 0.0),
    (47, 49, 0.0191, 0.0625, 0.01604, 0, 0.0),
    (42, 49, 0.0715, 0.323, 0.086, 0, 0.0),
    (42, 49, 0.0715, 0.323, 0.086, 0, 0.0),
    (45, 49, 0.0684, 0.186, 0.0444, 0, 0.0),
    (48, 49, 0.0179, 0.0505, 0.01258, 0, 0.0),
    (49, 50, 0.0267, 0.0752, 0.01874, 0, 0.0),
    (49, 51, 0.0486, 0.137, 0.0342, 0, 0.0),
    (51, 52, 0.0203, 0.0588, 0.01396, 0, 0.0),
    (52, 53, 0.0405, 0.1635, 0.04058, 0, 0.0),
    (53, 54, 0.0263, 0.122, 0.031, 0, 0.0),
    (49, 54, 0.073, 0.289, 0.0738, 0, 0.0),
    (49, 54, 0.0869, 0.291, 0.073, 0, 0.0),
    (54, 55, 0.0169, 0.0707, 0.0202, 0, 0.0),
    (54, 56, 0.00275, 0.00955, 0.00732, 0, 0.0),
    (55, 56, 0.00488, 0.0151, 0.00374, 0, 0.0),
    (56, 57, 0.0343, 0.0966, 0.0242, 0, 0.0),
    (50, 57, 0.0474, 0.134, 0.0332, 0, 0.0),
    (56, 58, 0.0343, 0.0966, 0.0242, 0, 0.0),
    (51, 58, 0.0255, 0.0719, 0.01788, 0, 0.0),
    (54, 59, 0.0503, 0.2293, 0.0598, 0, 0.0),
    (56, 59, 0.0825, 0.251, 0.0569, 0, 0.0),
    (56, 59, 0.0803, 0.239, 0.0536, 0, 0.0),
    (55, 59, 0.04739, 0.2158, 0.05646, 0, 0.0),
    (59, 60, 0.0317, 0.145, 0.0376, 0, 0.0),
    (59, 61, 0.0328, 0.15, 0.0388, 0, 0.0),
    (60, 61, 0.00264, 0.0135, 0.01456, 0, 0.0),
    (60, 62, 0.0123, 0.0561, 0.01468, 0, 0.0),
    (61, 62, 0.00824, 0.0376, 0.0098, 0, 0.0),
    (63, 59, 0.0, 0.0386, 0.0, 0, 0.96),
    (63, 64, 0.00172, 0.02, 0.216, 0, 0.0),
    (64, 61, 0.0, 0.0268, 0.0, 0, 0.985),
    (38, 65, 0.00901, 0.0986, 1.046, 0, 0.0),
    (64, 65, 0.00269, 0.0302, 0.38, 0, 0.0),
    (49, 66, 0.018, 0.0919, 0.0248, 0, 0.0),
    (49, 66, 0.018, 0.0919, 0.0248, 0, 0.0),
    (62, 66, 0.0482, 0.218, 0.0578, 0, 0.0),
    (62, 67, 0.0258, 0.117, 0.031, 0, 0.0),
    (65, 66, 0.0, 0.037, 0.0, 0, 0.935),
    (66, 67, 0.0224, 0.1015, 0.02682, 0, 0.0),
    (65, 68, 0.00138, 0.016, 0.638, 0, 0.0),
    (47, 69, 0.0844, 0.2778, 0.07092, 0, 0.0),
    (49, 69, 0.0985, 0.324, 0.0828, 0, 0.0),
    (68, 69, 0.0, 0.037, 0.0, 0, 0.935),
    (69, 70, 0.03, 0.127, 0.122, 0, 0.0),
    (24, 70, 0.00221, 0.4115, 0.10198, 0, 0.0),
    (70, 71, 0.00882, 0.0355, 0.00878, 0, 0.0),
    (24, 72, 0.0488, 0.196, 0.0488, 0, 0.0),
    (71, 72, 0.0446, 0.18, 0.04444, 0, 0.0),
    (71, 73, 0.00866, 0.0454, 0.01178, 0, 0.0),
    (70, 74, 0.0401, 0.1323, 0.03368, 0, 0.0),
    (70, 75, 0.0428, 0.141, 0.036, 0, 0.0),
    (69, 75, 0.0405, 0.122, 0.124, 0, 0.0),
    (74, 75, 0.0123, 0.0406, 0.01034, 0, 0.0),
    (76, 77, 0.0444, 0.148, 0.0368, 0, 0.0),
    (69, 77, 0.0309, 0.101, 0.1038, 0, 0.0),
    (75, 77, 0.0601, 0.1999, 0.04978, 0, 0.0),
    (77, 78, 0.00376, 0.0124, 0.01264, 0, 0.0),
    (78, 79, 0.00546, 0.0244, 0.00648, 0, 0.0),
    (77, 80, 0.017, 0.0485, 0.0472, 0, 0.0),
    (77, 80, 0.0294, 0.105, 0.0228, 0, 0.0),
    (79, 80, 0.0156, 0.0704, 0.0187, 0, 0.0),
    (68, 81, 0.00175, 0.0202, 0.808, 0, 0.0),
    (81, 80, 0.0, 0.037, 0.0, 0, 0.935),
    (77, 82, 0.0298, 0.0853, 0.08174, 0, 0.0),
    (82, 83, 0.0112, 0.03665, 0.03796, 0, 0.0),
    (83, 84, 0.0625, 0.132, 0.0258, 0, 0.0),
    (83, 85, 0.043, 0.148, 0.0348, 0, 0.0),
    (84, 85, 0.0302, 0.0641, 0.01234, 0, 0.0),
    (85, 86, 0.035, 0.123, 0.0276, 0, 0.0),
    (86, 87, 0.02828, 0.2074, 0.0445, 0, 0.0),
    (85, 88, 0.02, 0.102, 0.0276, 0, 0.0),
    (85, 89, 0.0239, 0.173, 0.047, 0, 0.0),
    (88, 89, 0.0139, 0.0712, 0.01934, 0, 0.0),
    (89, 90, 0.0518, 0.188, 0.0528, 0, 0.0),
    (89, 90, 0.0238, 0.0997, 0.106, 0, 0.0),
    (90, 91, 0.0254, 0.0836, 0.0214, 0, 0.0),
    (89, 92, 0.0099, 0.0505, 0.0548, 0, 0.0),
    (89, 92, 0.0393, 0.1581, 0.0414, 0, 0.0),
    (91, 92, 0.0387, 0.1272, 0.03268, 0, 0.0),
    (92, 93, 0.0258, 0.0848, 0.0218, 0, 0.0),
    (92, 94, 0.0481, 0.158, 0.0406, 0, 0.0),
    (93, 94, 0.0223, 0.0732, 0.01876, 0, 0.0),
    (94, 95, 0.0132, 0.0434, 0.0111, 0, 0.0),
    (80, 96, 0.0356, 0.182, 0.0494, 0, 0.0),
    (82, 96, 0.0162, 0.053, 0.0544, 0, 0.0),
    (94, 96, 0.0269, 0.0869, 0.023, 0, 0.0),
    (80, 97, 0.0183, 0.0934, 0.0254, 0, 0.0),
    (80, 98, 0.0238, 0.108, 0.0286, 0, 0.0),
    (80, 99, 0.0454, 0.206, 0.0546, 0, 0.0),
    (92, 100, 0.0648, 0.295, 0.0472, 0, 0.0),
    (94, 100, 0.0178, 0.058, 0.0604, 0, 0.0),
    (95, 96, 0.0171, 0.0547, 0.01474, 0, 0.0),
    (96, 97, 0.0173, 0.0885, 0.024, 0, 0.0),
    (98, 100, 0.0397, 0.179, 0.0476, 0, 0.0),
    (99, 100, 0.018, 0.0813, 0.0216, 0, 0.0),
    (100, 101, 0.0277, 0.1262, 0.0328, 0, 0.0),
    (92, 102, 0.0123, 0.0559, 0.01464, 0, 0.0),
    (101, 102, 0.0246, 0.112, 0.0294, 0, 0.0),
    (100, 103, 0.016, 0.0525, 0.0536, 0, 0.0),
    (100, 104, 0.0451, 0.204, 0.0541, 0, 0.0),
    (103, 104, 0.0466, 0.1584, 0.0407, 0, 0.0),
    (103, 105, 0.0535, 0.1625, 0.0408, 0, 0.0),
    (100, 106, 0.0605, 0.229, 0.062, 0, 0.0),
    (104, 105, 0.00994, 0.0378, 0.00986, 0, 0.0),
    (105, 106, 0.014, 0.0547, 0.01434, 0, 0.0),
    (105, 107, 0.053, 0.183, 0.0472, 0, 0.0),
    (105, 108, 0.0261, 0.0703, 0.01844, 0, 0.0),
    (106, 107, 0.053, 0.183, 0.0472, 0, 0.0),
    (108, 109, 0.0105, 0.0288, 0.0076, 0, 0.0),
    (103, 110, 0.03906, 0.1813, 0.0461, 0, 0.0),
    (109, 110, 0.0278, 0.0762, 0.0202, 0, 0.0),
    (110, 111, 0.022, 0.0755, 0.02, 0, 0.0),
    (110, 112, 0.0247, 0.064, 0.062, 0, 0.0),
    (17, 113, 0.00913, 0.0301, 0.00768, 0, 0.0),
    (32, 113, 0.0615, 0.203, 0.0518, 0, 0.0),
    (32, 114, 0.0135, 0.0612, 0.01628, 0, 0.0),
    (27, 115, 0.0164, 0.0741, 0.01972, 0, 0.0),
    (114, 115, 0.0023, 0.0104, 0.00276, 0, 0.0),
    (68, 116, 0.00034, 0.00405, 0.164, 0, 0.0),
    (12, 117, 0.0329, 0.14, 0.0358, 0, 0.0),
    (75, 118, 0.0145, 0.0481, 0.01198, 0, 0.0),
    (76, 118, 0.0164, 0.0544, 0.01356, 0, 0.0),
]

CASES = {
    "ieee14": ("IEEE 14 BUS TEST CASE", IEEE14_BUS, IEEE14_GEN, IEEE14_BRANCH),
    "ieee30": ("IEEE 30 BUS TEST CASE", IEEE30_BUS, IEEE30_GEN, IEEE30_BRANCH),
    "ieee118": ("IEEE 118 BUS TEST CASE", IEEE118_BUS, IEEE118_GEN, IEEE118_BRANCH),
}
