#pragma once

namespace ctm {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
// Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

// Upper tail of the chi-square distribution, Q(df/2, x/2).
double chi_square_survival(double x, double df);

// P(F > f) for an F(d1, d2) variable.
double f_survival(double f, double d1, double d2);

// P(|T| > |t|) for a Student t with df degrees of freedom.
double t_two_sided_p(double t, double df);

}  // namespace ctm
