#include "burstsim/app_profile.hpp"

#include <algorithm>
#include <cmath>

#include "burstsim/job.hpp"

namespace burstsim {

const char* to_string(Target target) {
    return target == Target::Hpc ? "hpc" : "cloud";
}

std::int64_t scaled_runtime(std::int64_t base_s, double slowdown) {
    if (base_s <= 0) throw NonPositiveField("base runtime must be positive");
    if (slowdown <= 0.0) throw NonPositiveField("slowdown must be positive");
    const double x = static_cast<double>(base_s) * slowdown;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < 1e-6) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(x));
}

void AppRegistry::add(AppProfile profile) {
    if (profile.base_runtime_s <= 0) throw NonPositiveField("app " + profile.name + ": base_runtime_s must be > 0");
    if (profile.cloud_slowdown <= 0.0) throw NonPositiveField("app " + profile.name + ": cloud_slowdown must be > 0");
    profiles_[profile.name] = std::move(profile);
}

const AppProfile& AppRegistry::get(const std::string& name) const {
    auto it = profiles_.find(name);
    if (it == profiles_.end()) throw UnknownApp("unknown application: " + name);
    return it->second;
}

std::int64_t uncapped_runtime_on(const Job& job, Target target, const AppRegistry& apps) {
    if (target == Target::Hpc) return job.base_runtime_s;
    const AppProfile& profile = apps.get(job.app);
    return scaled_runtime(job.base_runtime_s, profile.cloud_slowdown);
}

std::int64_t runtime_on(const Job& job, Target target, const AppRegistry& apps) {
    return std::min(uncapped_runtime_on(job, target, apps), job.req_walltime_s);
}

}  // namespace burstsim
