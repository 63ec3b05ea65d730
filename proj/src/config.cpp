#include "casdec/config.hpp"

#include <cmath>
#include <limits>

namespace casdec {

void PhysicalConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("PhysicalConfig: ") + name + " must be positive and finite");
    };
    positive(mass, "mass");
    positive(omega0, "omega0");
    positive(hbar, "hbar");
    positive(speed_of_light, "speed_of_light");
    if (!(transparency > 0.0))
        throw std::invalid_argument("PhysicalConfig: transparency must be positive");
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("PhysicalConfig: temperature must be >= 0");
}

double PhysicalConfig::thermal_ratio(double omega) const {
    if (temperature == 0.0) return std::numeric_limits<double>::infinity();
    return hbar * omega / temperature;
}

}  // namespace casdec
