// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------
//
// Traffic triple (lambda_i, lambda_s, tau_max) and the M/M/1 model of the
// delay-sensitive queue.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pawas {

enum class TrafficClass { DelayInsensitive, DelaySensitive, Hybrid };

std::string_view to_string(TrafficClass c);

struct TrafficPattern {
    double lambda_insensitive = 0.0;  ///< lambda_i, packets/s
    double lambda_sensitive = 0.0;    ///< lambda_s, packets/s
    double tau_max_s = 0.0;           ///< bound on the mean M/M/1 sojourn delay
    double mean_packet_bits_per_hz = 0.01;  ///< L-bar, mean packet length over bandwidth

    void validate() const;

    /// Pure delay-insensitive when lambda_s = 0 (this includes the all-zero
    /// pattern), pure delay-sensitive when lambda_i = 0, hybrid otherwise.
    TrafficClass classify() const;
};

struct QueueModel {
    double service_rate = 0.0;       ///< mu_s
    double load = 0.0;               ///< rho_s = lambda_s / mu_s
    double busy_probability = 0.0;   ///< p_on, equal to rho_s
    double required_capacity = 0.0;  ///< C* = L-bar mu_s, bit/s/Hz
};

/// Service rate that meets the delay bound with equality: mu_s = lambda_s + 1/tau_max.
QueueModel required_rate(const TrafficPattern& pattern);

/// Mean M/M/1 sojourn time 1/(mu - lambda). Throws UnstableQueueError when mu <= lambda.
double mm1_delay(double lambda, double mu);

/// FIFO single-server discrete-event run with Poisson arrivals and
/// exponential service; returns the empirical mean sojourn time.
/// Deterministic for a given seed.
double simulate_mm1(double lambda, double mu, std::size_t n_packets, std::uint64_t seed);

}  // namespace pawas
