#include <tuple>
#include <vector>

#include "doctest.h"
#include "hyperroad/kernels.hpp"
#include "hyperroad/reference.hpp"
#include "hyperroad/rng.hpp"

using namespace hyperroad;

namespace {

Tensor random_tensor(int rows, int cols, Rng& rng) {
    Tensor t(rows, cols);
    for (double& v : t.data) v = rng.uniform(-2.0, 2.0);
    return t;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference bitwise") {
    Rng rng(31);
    SUBCASE("matmul") {
        const std::vector<std::tuple<int, int, int>> shapes{{1, 1, 1}, {3, 5, 2}, {17, 9, 23}, {64, 64, 64}};
        for (auto [m, k, n] : shapes) {
            Tensor a = random_tensor(m, k, rng);
            Tensor b = random_tensor(k, n, rng);
            Tensor c1(m, n), c2(m, n);
            kernels::matmul(a, b, c1);
            ref::matmul(a, b, c2);
            CHECK(c1.data == c2.data);
        }
    }
    SUBCASE("segment_mean") {
        Tensor x = random_tensor(40, 8, rng);
        std::vector<std::vector<int>> sets;
        for (int i = 0; i < 25; ++i) {
            std::vector<int> s;
            const int len = static_cast<int>(rng.bounded(6));
            for (int t = 0; t < len; ++t) {
                s.push_back(static_cast<int>(rng.bounded(40)));
            }
            sets.push_back(std::move(s));
        }
        Tensor o1(25, 8), o2(25, 8);
        kernels::segment_mean(x, sets, o1);
        ref::segment_mean(x, sets, o2);
        CHECK(o1.data == o2.data);
    }
    SUBCASE("relu, gather, rows_dot") {
        Tensor x = random_tensor(30, 7, rng);
        Tensor r1(30, 7), r2(30, 7);
        kernels::relu(x, r1);
        ref::relu(x, r2);
        CHECK(r1.data == r2.data);

        std::vector<int> idx;
        for (int i = 0; i < 50; ++i) idx.push_back(static_cast<int>(rng.bounded(30)));
        Tensor g1(50, 7), g2(50, 7);
        kernels::gather_rows(x, idx, g1);
        ref::gather_rows(x, idx, g2);
        CHECK(g1.data == g2.data);

        Tensor y = random_tensor(30, 7, rng);
        Tensor d1(30, 1), d2(30, 1);
        kernels::rows_dot(x, y, d1);
        ref::rows_dot(x, y, d2);
        CHECK(d1.data == d2.data);
    }
}

TEST_CASE("segment_mean_backward accumulates in list order") {
    Tensor grad_out = Tensor::from_rows({{1, 2}, {4, 8}});
    std::vector<std::vector<int>> sets{{0, 1}, {1}};
    Tensor grad_x(3, 2);
    kernels::segment_mean_backward(grad_out, sets, grad_x);
    CHECK(grad_x.at(0, 0) == doctest::Approx(0.5));
    CHECK(grad_x.at(1, 0) == doctest::Approx(0.5 + 4.0));
    CHECK(grad_x.at(1, 1) == doctest::Approx(1.0 + 8.0));
    CHECK(grad_x.at(2, 0) == 0.0);
}
