#include "zeno/device.hpp"

#include <numbers>

#include "zeno/errors.hpp"

namespace zeno {

void DeviceParams::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw PreconditionError("device: eta must lie in (0, 1]");
  if (!(nbar >= 0.0)) throw PreconditionError("device: nbar must be >= 0");
  if (!(kappa_mhz > 0.0)) throw PreconditionError("device: kappa must be > 0");
  if (!(t1_spont_us > 0.0)) throw PreconditionError("device: t1_spont must be > 0");
}

double measurement_timescale(const DeviceParams& params) {
  params.validate();
  if (params.nbar <= 0.0) {
    throw PreconditionError("measurement_timescale: nbar = 0 means no measurement");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double kappa = two_pi * params.kappa_mhz;
  const double chi = two_pi * params.chi_mhz;
  return kappa / (16.0 * params.nbar * params.eta * chi * chi);
}

}  // namespace zeno
