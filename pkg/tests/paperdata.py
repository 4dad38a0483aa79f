"""Published coefficient data used as regression fixtures.

Degree-truncated (five significant digits), so identities hold only to about
1e-3; the fixtures are asserted through sampled minima at that tolerance.
Polynomial strings use the package grammar and parse to exact rationals.
"""

# quadratic-interaction planar system (the combined-certificate benchmark)
EX2_FIELD = ("2*x1 - x1*x2", "2*x1^2 - x2")
EX2_INIT_G = "0 - x1^2 - x2^2 - 4*x2 - 3"          # ball reading
EX2_UNSAFE_G = "0 - x1^2 - x2^2 + 2*x2 - 0.91"

EX2_PHI = (
    "0.030317*x1^8 + 6.9115e-05*x1^7*x2 - 3.6889e-05*x1^7 + 0.090347*x1^6*x2^2"
    " - 0.11095*x1^6*x2 - 0.75683*x1^6 - 9.0598e-05*x1^5*x2^3 - 0.00017438*x1^5*x2^2"
    " - 5.4845e-05*x1^5*x2 + 7.291e-05*x1^5 - 0.30715*x1^4*x2^4 + 1.0445*x1^4*x2^3"
    " - 1.5458*x1^4*x2^2 + 0.57141*x1^4*x2 - 0.26344*x1^4 - 6.3369e-05*x1^3*x2^5"
    " + 0.00010503*x1^3*x2^4 + 0.00038237*x1^3*x2^3 - 0.00036159*x1^3*x2^2"
    " - 0.00010184*x1^3*x2 + 9.2214e-05*x1^3 + 0.03383*x1^2*x2^6 + 0.33103*x1^2*x2^5"
    " - 2.9864*x1^2*x2^4 + 2.0938*x1^2*x2^3 - 0.12636*x1^2*x2^2 + 0.79519*x1^2*x2"
    " - 0.62237*x1^2 + 1.4962e-05*x1*x2^7 - 0.00014241*x1*x2^6 + 0.00048485*x1*x2^5"
    " - 0.00065416*x1*x2^4 + 0.00014521*x1*x2^3 + 0.00040002*x1*x2^2 - 0.00031516*x1*x2"
    " + 6.343e-05*x1 - 0.0043261*x2^8 + 0.05803*x2^7 - 0.29525*x2^6 + 0.80728*x2^5"
    " - 1.2538*x2^4 + 1.2862*x2^3 - 0.76567*x2^2 + 0.29172*x2 - 0.072688"
)
EX2_CHI = (
    "9.8484*x1^6 + 0.001271*x1^5*x2 + 13.4422*x1^4*x2^2 - 31.2496*x1^4*x2"
    " - 85.8767*x1^4 - 0.0031705*x1^3*x2^2 - 0.012227*x1^3*x2 - 0.0042103*x1^3"
    " + 5.396*x1^2*x2^4 - 28.4976*x1^2*x2^3 - 46.3212*x1^2*x2^2 + 87.5486*x1^2*x2"
    " - 44.1755*x1^2 + 0.0049683*x1*x2^2 - 0.0058767*x1*x2 - 0.0020784*x1"
    " + 0.46783*x2^6 - 4.0071*x2^5 + 6.1875*x2^4 + 37.296*x2^3 - 100*x2^2"
    " + 2.0932*x2 - 12.8904"
)
EX2_DELTA = (
    "0.014034*x1^8 + 3.0608e-06*x1^7*x2 - 5.813e-06*x1^7 + 0.0021473*x1^6*x2^2"
    " - 0.013483*x1^6*x2 - 0.0064165*x1^6 + 2.5531e-06*x1^5*x2^3 + 2.7689e-05*x1^5*x2^2"
    " - 1.0371e-05*x1^5*x2 - 2.9253e-06*x1^5 + 0.02322*x1^4*x2^4 - 0.008259*x1^4*x2^3"
    " + 0.0095319*x1^4*x2^2 + 0.014437*x1^4*x2 + 0.02625*x1^4 + 1.126e-05*x1^3*x2^5"
    " - 3.9758e-05*x1^3*x2^4 + 3.4426e-05*x1^3*x2^3 - 1.2647e-05*x1^3*x2^2"
    " + 8.5785e-06*x1^3*x2 - 5.7495e-07*x1^3 + 0.00051658*x1^2*x2^6 - 0.010421*x1^2*x2^5"
    " + 0.032928*x1^2*x2^4 - 0.041062*x1^2*x2^3 + 0.030059*x1^2*x2^2 - 0.030394*x1^2*x2"
    " + 0.013862*x1^2 + 5.2631e-07*x1*x2^7 - 4.7302e-06*x1*x2^6 + 1.3673e-05*x1*x2^5"
    " - 1.3654e-05*x1*x2^4 + 8.3569e-07*x1*x2^3 - 1.6543e-06*x1*x2^2 + 1.3272e-05*x1*x2"
    " - 8.3958e-06*x1 + 0.00013121*x2^8 - 0.0015345*x2^7 + 0.0076214*x2^6 - 0.019749*x2^5"
    " + 0.02836*x2^4 - 0.023961*x2^3 + 0.01575*x2^2 - 0.010837*x2 + 0.0044092"
)
EX2_U1 = (
    "33.1703*x1^4 - 0.0080558*x1^3*x2 - 0.014014*x1^3 + 31.8846*x1^2*x2^2"
    " - 22.7751*x1^2*x2 + 33.5594*x1^2 + 0.002164*x1*x2^3 - 0.0059715*x1*x2^2"
    " - 0.037073*x1*x2 + 0.020061*x1 + 10.479*x2^4 + 6.0815*x2^3 + 19.5851*x2^2"
    " - 18.8795*x2 + 24.5699"
)
EX2_U2 = (
    "0.579*x1^8 + 7.0204e-06*x1^7*x2 - 1.8771e-05*x1^7 + 0.61572*x1^6*x2^2"
    " - 0.43594*x1^6*x2 + 0.39633*x1^6 + 4.0635e-06*x1^5*x2^3 + 5.4444e-06*x1^5*x2^2"
    " - 9.0679e-06*x1^5*x2 + 4.1779e-05*x1^5 + 0.5972*x1^4*x2^4 - 0.446*x1^4*x2^3"
    " + 0.8667*x1^4*x2^2 - 0.48811*x1^4*x2 + 0.57967*x1^4 + 2.0738e-06*x1^3*x2^5"
    " + 4.4963e-06*x1^3*x2^4 - 3.9037e-06*x1^3*x2^3 - 1.5008e-05*x1^3*x2^2"
    " - 6.0762e-05*x1^3*x2 + 3.4303e-05*x1^3 + 0.42761*x1^2*x2^6 - 0.20453*x1^2*x2^5"
    " + 0.45199*x1^2*x2^4 - 0.55762*x1^2*x2^3 + 0.80255*x1^2*x2^2 - 0.18571*x1^2*x2"
    " + 0.36852*x1^2 + 5.1943e-06*x1*x2^7 - 5.229e-06*x1*x2^6 + 4.0646e-06*x1*x2^5"
    " - 8.2704e-06*x1*x2^4 + 1.2324e-05*x1*x2^3 - 3.1593e-06*x1*x2^2 - 8.7493e-06*x1*x2"
    " + 3.0456e-06*x1 + 0.18043*x2^8 + 0.1527*x2^7 + 0.11373*x2^6 + 0.090147*x2^5"
    " + 0.40667*x2^4 - 0.26137*x2^3 + 0.68588*x2^2 - 0.38649*x2 + 0.50807"
)
EX2_U3 = (
    "0.82691*x1^8 + 6.8463e-06*x1^7*x2 + 7.824e-06*x1^7 + 0.66339*x1^6*x2^2"
    " + 0.69976*x1^6*x2 + 0.71112*x1^6 + 2.8381e-06*x1^5*x2^3 + 2.1678e-05*x1^5*x2^2"
    " - 2.269e-05*x1^5*x2 - 2.7155e-05*x1^5 + 0.67426*x1^4*x2^4 + 0.31337*x1^4*x2^3"
    " + 1.0011*x1^4*x2^2 + 0.41117*x1^4*x2 + 0.94169*x1^4 + 5.177e-06*x1^3*x2^5"
    " + 2.4687e-05*x1^3*x2^4 + 4.9193e-05*x1^3*x2^3 - 8.5264e-05*x1^3*x2^2"
    " - 9.261e-05*x1^3*x2 - 0.00018356*x1^3 + 0.55287*x1^2*x2^6 + 0.26734*x1^2*x2^5"
    " + 0.43798*x1^2*x2^4 - 0.42762*x1^2*x2^3 + 0.90269*x1^2*x2^2 + 0.47337*x1^2*x2"
    " + 0.73082*x1^2 + 6.4342e-06*x1*x2^7 + 1.7535e-05*x1*x2^6 + 3.191e-05*x1*x2^5"
    " + 2.9182e-05*x1*x2^4 + 7.677e-05*x1*x2^3 + 2.0006e-05*x1*x2^2 - 3.1684e-05*x1*x2"
    " - 6.6486e-06*x1 + 0.45107*x2^8 - 0.15576*x2^7 + 0.12208*x2^6 - 0.29031*x2^5"
    " + 0.39853*x2^4 - 0.57126*x2^3 + 0.29347*x2^2 - 0.33244*x2 + 0.43254"
)
EX2_PSI = (-4, 2)

# degree-6 certificate for the farther-unsafe variant of the same field
EX3_PHI = EX2_CHI
EX3_PSI = (-4, "1.5")

# Duffing-like oscillator fixtures
EX4_FIELD = ("x2", "2*x1 - x2 - x1^2*x2 - x1^3")
EX4_G0 = "0.16 - x1^2 - 2*x1 - 1 - x2^2 + 4*x2 - 4"
EX4_G1 = "0.04 - x1^2 + 2*x1 - 1 - x2^2"
EX4_PHI = ("0 - 0.91253*x1^2 + 0.40176*x1*x2 + 1.3603*x1 + 0.13922*x2^2"
           " - 1.0308*x2 - 0.27657")
EX4_CHI = (
    "0.19394*x1^4 + 0.29363*x1^3*x2 - 0.1696*x1^3 + 0.091674*x1^2*x2^2"
    " - 0.2317*x1^2*x2 - 1.3805*x1^2 + 0.056453*x1*x2^3 - 0.14904*x1*x2^2"
    " + 0.096278*x1*x2 + 1.7932*x1 + 0.070488*x2^4 - 0.063002*x2^3"
    " + 0.48804*x2^2 - 1.1726*x2 - 0.38201"
)
EX4_DELTA = (
    "0.1956*x1^4 + 0.23674*x1^3*x2 - 0.13109*x1^3 + 0.14603*x1^2*x2^2"
    " - 0.16935*x1^2*x2 + 1.0686*x1^2 + 0.35005*x1*x2^3 - 0.29307*x1*x2^2"
    " - 0.5897*x1*x2 - 1.8943*x1 + 0.26073*x2^4 - 0.23047*x2^3"
    " + 0.027813*x2^2 + 0.64131*x2 + 1.7118"
)
EX4_U1 = (
    "0.47292*x1^4 + 0.03761*x1^3*x2 - 0.15676*x1^3 + 0.45935*x1^2*x2^2"
    " + 0.13126*x1^2*x2 + 0.26007*x1^2 + 0.0766*x1*x2^3 - 0.02395*x1*x2^2"
    " + 0.045239*x1*x2 + 0.068505*x1 + 0.33983*x2^4 + 0.17729*x2^3"
    " + 0.4338*x2^2 + 0.054172*x2 + 0.37428"
)
EX4_U2 = (
    "0.45008*x1^4 + 0.0064431*x1^3*x2 - 0.14066*x1^3 + 0.48519*x1^2*x2^2"
    " + 0.18081*x1^2*x2 + 0.31882*x1^2 + 0.045636*x1*x2^3 - 0.030792*x1*x2^2"
    " + 0.0463*x1*x2 + 0.022898*x1 + 0.3829*x2^4 + 0.24085*x2^3"
    " + 0.48187*x2^2 + 0.10909*x2 + 0.37734"
)
EX4_U3 = (
    "0.5497*x1^4 - 0.035471*x1^3*x2 + 0.073809*x1^3 + 0.66023*x1^2*x2^2"
    " - 0.085302*x1^2*x2 + 0.34888*x1^2 - 0.020016*x1*x2^3 + 0.55526*x1*x2^2"
    " + 0.032773*x1*x2 - 0.10637*x1 + 0.81332*x2^4 - 0.055596*x2^3"
    " + 0.49761*x2^2 + 0.25765*x2 + 0.93038"
)
EX4_PSI = (-4, 2)

# hybrid two-mode fixtures: the published second-mode data
EX5_F2 = ("x2", "0 - x1 - x3", "0 - x1 - 2*x2 - 3*x3")
EX5_PHI2 = (
    "1.6165*x1^2 - 0.20569*x1*x2 + 0.019824*x1*x3 + 9.5436e-6*x1 + 0.054446*x2^2"
    " + 0.00069996*x2*x3 - 1.6916e-7*x2 + 0.09101*x3^2 + 1.511e-8*x3 - 9.6424"
)
EX5_CHI2 = (
    "0.089818*x1^2 - 0.082739*x1*x2 + 0.021192*x1*x3 - 1.5224e-9*x1"
    " + 0.0054928*x2^2 + 0.0084123*x2*x3 + 1.277e-9*x2 + 0.035173*x3^2"
    " + 2.7238e-10*x3 - 5.3973"
)
EX5_DELTA2 = (
    "5.5914*x1^2 - 0.21067*x1*x2 - 0.024733*x1*x3 + 8.7702e-6*x1 + 0.20573*x2^2"
    " - 0.052174*x2*x3 + 2.8769e-7*x2 + 0.22449*x3^2 + 8.7144e-8*x3 + 0.29484"
)
EX5_U21 = (
    "1.5356*x1^2 + 0.013731*x1*x2 - 0.0019249*x1*x3 - 1.0079e-7*x1 + 0.66295*x2^2"
    " - 0.064549*x2*x3 - 6.3485e-8*x2 + 0.39611*x3^2 - 6.6953e-9*x3 + 2.6867"
)
EX5_U22 = (
    "0.73288*x1^2 - 0.0022775*x1*x2 + 0.0027401*x1*x3 - 5.1154e-8*x1 + 0.59472*x2^2"
    " - 0.055279*x2*x3 - 4.8206e-8*x2 + 0.34978*x3^2 - 7.4061e-9*x3 + 0.60632"
)
EX5_U23 = (
    "2.0821*x1^2 + 0.040593*x1*x2 - 0.0050855*x1*x3 - 8.427e-5*x1 + 0.61146*x2^2"
    " - 0.0090046*x2*x3 - 8.3808e-6*x2 + 0.14389*x3^2 - 1.148e-6*x3 + 4.5124"
)
EX5_U24 = (
    "1.0004*x1^2 + 0.01131*x1*x2 - 0.0022779*x1*x3 - 2.88e-5*x1 + 0.517*x2^2"
    " - 0.0080914*x2*x3 - 1.1074e-5*x2 + 0.083205*x3^2 - 8.2264e-7*x3 + 0.70099"
)
EX5_U41 = (
    "0.00043056*x1^2 - 2.9796e-5*x1*x2 + 0.00010489*x1*x3 + 5.9287e-12*x1"
    " + 3.8141e-6*x2^2 + 9.5752e-6*x2*x3 + 2.6518e-13*x2 + 3.9903e-5*x3^2"
    " + 5.1833e-13*x3 + 0.0036"
)
EX5_U42 = (
    "0.0056936*x1^2 + 0.0053069*x1*x2 + 0.0035737*x1*x3 - 7.5779e-11*x1"
    " + 0.0020039*x2^2 + 0.0026891*x2*x3 + 2.9818e-11*x2 + 0.0016505*x3^2"
    " - 1.6159e-11*x3 + 0.52902"
)
EX5_U51 = (
    "0.028447*x1^2 - 0.0028324*x1*x2 - 0.00037952*x1*x3 + 1.25e-7*x1"
    " + 0.00052784*x2^2 - 8.6183e-5*x2*x3 - 6.3026e-9*x2 + 8.8611e-5*x3^2"
    " - 8.6257e-10*x3 + 0.011143"
)
EX5_U52 = (
    "0.12129*x1^2 - 0.013405*x1*x2 - 0.0015008*x1*x3 - 8.2285e-7*x1"
    " + 0.0047845*x2^2 - 0.00073624*x2*x3 - 2.0348e-7*x2 + 0.00052816*x3^2"
    " + 2.1178e-8*x3 + 3.5079"
)
EX5_G11 = "1.01 - x1^2 - 0.01*x2^2 - 0.01*x3^2"
EX5_G12 = "x1^2 + 0.01*x2^2 + 0.01*x3^2 - 0.99"
EX5_D2 = "x1^2 + x2^2 + x3^2 - 0.03"
EX5_D21 = "26.01 - x1^2"
EX5_U2SET = "x1^2 - 10.24"
EX5_PSI = ("-0.2", 1)
