// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#include "pawas/traffic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "pawas/errors.hpp"

namespace pawas {

std::string_view to_string(TrafficClass c) {
    switch (c) {
        case TrafficClass::DelayInsensitive: return "delay-insensitive";
        case TrafficClass::DelaySensitive: return "delay-sensitive";
        case TrafficClass::Hybrid: return "hybrid";
    }
    return "?";
}

void TrafficPattern::validate() const {
    if (!(lambda_insensitive >= 0.0)) throw ValidationError("lambda_i", "must be >= 0");
    if (!(lambda_sensitive >= 0.0)) throw ValidationError("lambda_s", "must be >= 0");
    if (!(tau_max_s >= 0.0)) throw ValidationError("tau_max", "must be >= 0");
    if (lambda_sensitive > 0.0 && !(tau_max_s > 0.0))
        throw ValidationError("tau_max", "must be > 0 when lambda_s > 0");
    if (!(mean_packet_bits_per_hz >= 0.0)) throw ValidationError("l_bar", "must be >= 0");
}

TrafficClass TrafficPattern::classify() const {
    if (lambda_sensitive == 0.0) return TrafficClass::DelayInsensitive;
    if (lambda_insensitive == 0.0) return TrafficClass::DelaySensitive;
    return TrafficClass::Hybrid;
}

QueueModel required_rate(const TrafficPattern& pattern) {
    if (!(pattern.lambda_sensitive >= 0.0)) throw DomainError("lambda_s must be >= 0");
    if (pattern.lambda_sensitive == 0.0) return {};
    if (!(pattern.tau_max_s > 0.0)) throw DomainError("tau_max must be > 0 when lambda_s > 0");

    QueueModel q;
    q.service_rate = pattern.lambda_sensitive + 1.0 / pattern.tau_max_s;
    q.load = pattern.lambda_sensitive / q.service_rate;
    q.busy_probability = q.load;
    q.required_capacity = pattern.mean_packet_bits_per_hz * q.service_rate;
    return q;
}

double mm1_delay(double lambda, double mu) {
    if (!(lambda >= 0.0)) throw DomainError("arrival rate must be >= 0");
    if (!(mu > lambda))
        throw UnstableQueueError("unstable queue: mu=" + std::to_string(mu) +
                                 " <= lambda=" + std::to_string(lambda));
    return 1.0 / (mu - lambda);
}

double simulate_mm1(double lambda, double mu, std::size_t n_packets, std::uint64_t seed) {
    if (!(lambda > 0.0)) throw DomainError("simulation needs a positive arrival rate");
    if (!(mu > lambda)) throw UnstableQueueError("unstable queue: mu <= lambda");
    if (n_packets < 10'000) throw DomainError("simulation needs at least 10^4 packets");

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> interarrival(lambda);
    std::exponential_distribution<double> service(mu);

    // Event times for a FIFO server: each packet departs at
    // max(its arrival, previous departure) + its service time.
    double arrival = 0.0;
    double last_departure = 0.0;
    double total_sojourn = 0.0;
    for (std::size_t n = 0; n < n_packets; ++n) {
        arrival += interarrival(rng);
        const double start = std::max(arrival, last_departure);
        last_departure = start + service(rng);
        total_sojourn += last_departure - arrival;
    }
    return total_sojourn / static_cast<double>(n_packets);
}

}  // namespace pawas
