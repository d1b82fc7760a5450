#pragma once

namespace sf {

// Bessel function of the first kind J_order(x) for integer order >= 0 and
// |x| <= 30 (throws InvalidArgument outside that range). Absolute error is
// at most ~1e-12 everywhere on the supported range: small |x| uses the
// alternating power series truncated when a term drops below 1e-16 (hard
// cap 200 terms), large |x| switches to backward recurrence, which avoids
// the cancellation the raw series suffers there.
double bessel_j(int order, double x);

}  // namespace sf
