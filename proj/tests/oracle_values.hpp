#pragma once
// Generated by tests/oracles/gen_oracle_values.py -- do not edit by hand.
namespace oracle {
// roots of the clamped determinant for (mu=1, eps=0, L=1); cos k cosh k = 1
inline constexpr double kClampedK1 = 4.730040744862704026;
inline constexpr double kClampedK2 = 7.8532046240958375565;
inline constexpr double kClampedK3 = 10.995607838001670907;
inline constexpr double kClampedK4 = 14.137165491257464177;
// wavenumbers for (mu=0.01, eps=0.1, L=1)
inline constexpr double kClampedDefaultQ1 = 4.5225393728550081748;
inline constexpr double kClampedDefaultQ2 = 7.7771014410918102984;
// ground mode of mu f'''' - (eps+c) f'' = lam f, (mu, eps+c) = (0.01, 0.07), L=1
// residual of the redundant boundary row: 1.6873e-31
inline constexpr double kProbeQ1 = 4.5788439324453245889;
inline constexpr double kProbeQ2 = 7.7990139147258096543;
inline constexpr double kProbeP1 = 5.2882711501672608739;
inline constexpr double kProbeLambda1 = 5.8632594496278900016;
inline constexpr double kProbeCoefA = 0.94819781591524335265;
inline constexpr double kProbeCoefB = 0.94819781591524335265;
inline constexpr double kProbeCoefC = -0.95298667404579005798;
inline constexpr double kProbeCoefD = 1.0895768556142522905;
// polynomial field F=(x^2 y + 2 y^3 + 1, x y^2 + x^3 + 2), g = 1 + x + 2 y + x y^2 on [0,1]^2
inline constexpr double kGGTrace = 11.95;  // 239/20
inline constexpr double kGGVolGrad = 8.616666666666667;  // 517/60
inline constexpr double kGGVolDiv = 3.3333333333333335;  // 10/3
// sum over the integer lattice of zeta(|k|/gamma)^2, gamma in {2,3,4,6}
inline constexpr double kLatticeSumG2 = 97.02580495726058;
inline constexpr double kLatticeSumG3 = 343.25472799843993;
inline constexpr double kLatticeSumG4 = 809.2997126588018;
inline constexpr double kLatticeSumG6 = 2733.7845681768404;
inline constexpr double kLatticeSlope = 3.0351187820241305;
}  // namespace oracle
