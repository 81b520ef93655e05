"""Regenerate src/fareymf/data/reference_tables.json from the transcribed columns below.

Values are exactly as printed.  Presumed misprints are kept as printed and
listed under "corrections" with the value the rest of the table implies.
"""
import json
from pathlib import Path

T1 = [  # m, K, y, z, alpha, f_H
    (1.01, 10, .8892, .0099, .7325, .0587), (1.02, 20, .8152, .0196, .7336, .1021),
    (1.04, 20, .7074, .0383, .7358, .1730), (1.08, 20, .5689, .0733, .7404, .2821),
    (1.2, 20, .3744, .1596, .7561, .4912), (1.4, 25, .2582, .2561, .7863, .6770),
    (1.8, 30, .1863, .3531, .8562, .8402), (2, 30, .1717, .3780, .8942, .8809),
    (2.4, 50, .1560, .4070, .9736, .9290), (3, 60, .1456, .4268, 1.0988, .9633),
    (3.5, 70, .1416, .4346, 1.2061, .9773), (4, 100, .1393, .4386, 1.3173, .9854),
    (5, 300, .1371, .4419, 1.5528, .9936), (6, 300, .1362, .4437, 1.6879, .9968),
    (7, 400, .1358, .4443, 2.032, .9983),
]
T2_K = list(range(10, 23))
T2_A = [2.709, 2.8906, 3.0684, 3.2403, 3.4144, 3.5834, 3.75, 3.9144, 4.0768, 4.2374, 4.3962, 4.5534, 4.7091]
T2_D = [.1814, .1777, .1745, .1716, .1690, .1666, .1644, .1624, .1605, .1588, .1572, .1557, None]
T3_A = [1.2220, 1.2398, 1.2564, 1.2722, 1.2871, 1.3012, 1.3147, 1.3276, 1.3399, 1.3518, 1.3632, 1.3741, 1.3847]
T3_D = [.0178, .0167, .0157, .0149, .0141, .0135, .0129, .0123, .0118, .0114, .0110, .0106, None]
T4 = dict(
    alpha=[.4921, .5925, .6440, .7591, .8291, .9101, 1.0271, 1.183, 1.1680, 1.2718, 1.3226, 1.3506, 1.3591, 1.3631, 1.3652],
    f_bar_H=[.4913, .5906, .6339, .7480, .8103, .8767, .9542, .9851, .9813, .8610, .6496, .3810, .2351, .1392, .081],
    phi=[.9983, .9968, .9936, .9854, .9773, .9633, .9290, .8809, .8402, .6770, .4912, .2821, .1730, .1021, .0587],
    phi_prime=[-.015, -.0621, -.0712, -.1157, -.1729, -.2931, -.5274, -.82, -1.5718, -3.6577, -7.9559, -12.9209, -17.3957, -21.2014],
    X=[-.0079, -.0330, -.0467, -.0877, -.1477, -.2945, -.6261, -1.0871, -2.3704, -6.1776, -13.3682, -23.8365, -32.4206, -39.7022],
    Y=[-.044, -.0237, -.0348, -.0728, -.1305, -.2740, -.6058, -1.0711, -2.3348, -6.1523, -13.3185, -23.7174, -32.2273, -39.4545],
)
T5 = [.8190, .3952, .3420, .2043, .1320, .0750, .0335, .0150, .0153, .0041, .0037, .005, .006, .0063]
T6_X = [.7439, .7749, .7906, .8332, .8847, .9719, 1.0726, 1.14, 1.2223, 1.3007, 1.3474, 1.3696, 1.3742, 1.3753]
T6_Y = [.5423, .6182, .7016, .7941, .8696, .9686, 1.0727, 1.1431, 1.2199, 1.2972, 1.3366, 1.3548, 1.3611, 1.3642]
T7 = [.3718, .2534, .1269, .0492, .0174, .0034, -.001, -.0027, .0020, .0027, .0081, .0109, .0096, .0082]
T8_X = [-1.0169, -1.0703, -1.0807, -1.1315, -1.1970, -1.3360, -1.6107, -1.9597, -2.8786, -5.5259, -10.5229, -17.8914, -23.9972, -29.2117]
T8_Y = [-1.0057, -1.0336, -1.0395, -1.0733, -1.1207, -1.23, -1.4707, -1.7979, -2.6760, -5.3288, -10.3522, -17.7334, -23.8149, -29.0026]
T9 = [.0110, -.0343, -.0382, -.0510, -.0638, -.0793, .0869, -.0825, .0704, .0357, .0162, .0088, .0076, .0072]
T10_X = [-.7, -.1, -.5, -.9, -1.4, -2.6, -5, -12, -34.3, -126.9, -404.2, -975.6, -1703.4]
T10_Y = [-.40, -.1, -.4, -.6, -1.1, -2.3, -4.6, -11.6, -34, -126.9, -403.1, -970.8, -1693.9]
T11_X = [1.2047, 1.2410, 1.2936, 1.3352, 1.3617, 1.3709, 1.3743]
T11_Y = [1.1431, 1.2199, 1.2972, 1.3366, 1.3548, 1.3611, 1.3649]
T12 = [.0538, .0173, -.0028, -.0010, .0051, .0072, .0074]


def rows(**cols):
    n = max(len(v) for v in cols.values())
    out = []
    for i in range(n):
        r = {"row": i + 1}
        for name, vals in cols.items():
            r[name] = vals[i] if i < len(vals) else None
        out.append(r)
    return out


tables = {
    "1": {"title": "theoretical spectrum (m, K, y, z, alpha, f_H)",
          "rows": [dict(row=i + 1, m=m, K=K, y=y, z=z, alpha=a, f_H=f) for i, (m, K, y, z, a, f) in enumerate(T1)]},
    "2": {"title": "alpha_max and its increments", "index": "k",
          "rows": [dict(row=i + 1, k=k, alpha_max=a, delta=d) for i, (k, a, d) in enumerate(zip(T2_K, T2_A, T2_D))]},
    "3": {"title": "alpha_k = 1/beta_k and its increments", "index": "k",
          "rows": [dict(row=i + 1, k=k, alpha_k=a, delta_bar=d) for i, (k, a, d) in enumerate(zip(T2_K, T3_A, T3_D))]},
    "4": {"title": "phi grid and first Legendre equation", "rows": rows(**T4)},
    "5": {"title": "errors of table 4", "rows": rows(delta=T5)},
    "6": {"title": "second Legendre equation", "rows": rows(X=T6_X, Y=T6_Y)},
    "7": {"title": "errors of table 6", "rows": rows(delta=T7)},
    "8": {"title": "tau(phi'(alpha)) against alpha phi' - phi", "rows": rows(X=T8_X, Y=T8_Y)},
    "9": {"title": "errors of table 8", "rows": rows(delta=T9)},
    "10": {"title": "derivative equation with phi''", "rows": rows(X=T10_X, Y=T10_Y)},
    "11": {"title": "cancelled derivative equation on the upper sub-grid", "first_n": 8,
           "rows": [dict(row=i + 1, n=i + 8, X=x, Y=y) for i, (x, y) in enumerate(zip(T11_X, T11_Y))]},
    "12": {"title": "errors of table 11", "first_n": 8,
           "rows": [dict(row=i + 1, n=i + 8, delta=d) for i, d in enumerate(T12)]},
}
corrections = [
    {"table": "1", "row": 14, "column": "alpha", "printed": 1.6879, "implied": None,
     "note": "y, z and f_H of this row solve the system, which then gives alpha = 1.788; the printed value is not reproducible"},
    {"table": "4", "row": 8, "column": "alpha", "printed": 1.183, "implied": 1.1183,
     "note": "1/0.8942 from table 1 row m=2; the printed value breaks the monotone grid"},
    {"table": "4", "row": 11, "column": "phi_prime", "printed": -7.9559, "implied": -7.4559,
     "note": "Y_11 / alpha_11^2 = -7.455 with the table's own midpoint alpha"},
    {"table": "4", "row": 1, "column": "Y", "printed": -0.044, "implied": -0.0044,
     "note": "alpha^2 phi' at the first midpoint is -0.0044; the printed Delta_1 also needs -0.0044"},
    {"table": "11", "row": 7, "column": "Y", "printed": 1.3649, "implied": 1.3642,
     "note": "the same quantity is printed as 1.3642 in table 6 row 14"},
]
pi_bar = {"pi_bar_18": 0.3914, "pi_bar_20": 0.3917, "pi_bar_22": 0.3921, "two_pi_bar_22_over_ln2": 1.1314}

doc = {"version": 1,
       "level_offset": {"note": "table index k refers to the k-th partition in a count starting at 1, i.e. level k-1 here",
                        "tables": ["2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "pi_bar"]},
       "tables": tables, "corrections": corrections, "pi_bar": pi_bar}
out = Path(__file__).resolve().parents[1] / "src" / "fareymf" / "data" / "reference_tables.json"
out.write_text(json.dumps(doc, indent=1) + "\n")
print("wrote", out)
