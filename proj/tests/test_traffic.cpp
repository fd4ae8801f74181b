#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "leobeam/rng.hpp"
#include "leobeam/traffic.hpp"

using namespace leobeam;

TEST_CASE("arrival draws") {
    TrafficSpec spec;
    spec.mean_rates = {0.0, 5.0, 2.5};
    spec.rng_seed = 99;

    SUBCASE("zero mean gives zero always") {
        for (int f = 1; f <= 200; ++f) CHECK(draw_arrivals(spec, f)[0] == 0.0);
    }
    SUBCASE("deterministic per (seed, cell, epoch)") {
        auto a = draw_arrivals(spec, 17);
        auto b = draw_arrivals(spec, 17);
        CHECK(a == b);
        auto c = draw_arrivals(spec, 18);
        CHECK(a != c);
    }
    SUBCASE("sample mean within the 3-sigma CLT band") {
        // Poisson(5): sigma of the mean over 1e5 draws is ~0.00707
        double sum = 0.0;
        const int n = 100000;
        for (int f = 1; f <= n; ++f) sum += draw_arrivals(spec, f)[1];
        double mean = sum / n;
        CHECK(mean > 4.95);
        CHECK(mean < 5.05);
    }
    SUBCASE("large means stay exact via chunked sampling") {
        TrafficSpec big;
        big.mean_rates = {225.0};
        big.rng_seed = 7;
        double sum = 0.0;
        const int n = 20000;
        for (int f = 1; f <= n; ++f) sum += draw_arrivals(big, f)[0];
        double mean = sum / n;
        CHECK(mean > 225.0 - 3.0 * std::sqrt(225.0 / n));
        CHECK(mean < 225.0 + 3.0 * std::sqrt(225.0 / n));
    }
}

TEST_CASE("service rate") {
    // 500 MHz, 20 dB SNR, 8 ms slot, 1e6-bit packets
    double r = service_rate_packets_per_slot(20.0, 5e8, 0.008, 1e6);
    CHECK(r == doctest::Approx(5e8 * std::log2(101.0) * 0.008 / 1e6).epsilon(1e-12));
    CHECK(r == doctest::Approx(26.6328).epsilon(1e-4));
    CHECK(service_rate_packets_per_slot(-300.0, 5e8, 0.008, 1e6) == doctest::Approx(0.0));
    CHECK(service_rate_packets_per_slot(20.0, 1e9, 0.008, 1e6) == doctest::Approx(2 * r));
    CHECK_THROWS_AS(service_rate_packets_per_slot(20.0, 5e8, 0.008, 0.0), std::invalid_argument);
}

TEST_CASE("queue update follows the max(Q - tR, 0) + A rule") {
    QueueState q{{10.0, 4.0, 0.0}, 1};
    QueueState next = update_queues(q, {2, 2, 0}, {3.0, 3.0, 3.0}, {1.0, 7.0, 0.0});
    CHECK(next.q[0] == doctest::Approx(5.0));   // 10 - 6 + 1
    CHECK(next.q[1] == doctest::Approx(7.0));   // truncation branch
    CHECK(next.q[2] == doctest::Approx(0.0));
    CHECK(next.epoch_index == 2);
    CHECK_THROWS_AS(update_queues(q, {1}, {1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("queue invariants under random traffic") {
    rng::Stream st(5);
    QueueState q{std::vector<double>(8, 0.0), 1};
    for (int f = 1; f <= 500; ++f) {
        std::vector<int> slots(8);
        std::vector<double> rates(8), arr(8);
        for (int c = 0; c < 8; ++c) {
            slots[c] = st.next_int(16);
            rates[c] = st.next_unit() * 3.0;
            arr[c] = st.next_unit() * 5.0;
        }
        QueueState next = update_queues(q, slots, rates, arr);
        for (int c = 0; c < 8; ++c) {
            CHECK(next.q[c] >= 0.0);
            // conservation on the unsaturated branch
            if (q.q[c] >= slots[c] * rates[c])
                CHECK(next.q[c] ==
                      doctest::Approx(q.q[c] - slots[c] * rates[c] + arr[c]).epsilon(1e-12));
        }
        q = next;
    }
}
