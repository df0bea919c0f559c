#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>

#include "tjlc/config.hpp"
#include "tjlc/io.hpp"
#include "tjlc/lc_norm.hpp"
#include "tjlc/metrics.hpp"
#include "tjlc/solver.hpp"
#include "tjlc/t_algebra.hpp"
#include "tjlc/tensor_ops.hpp"

namespace py = pybind11;
using namespace tjlc;

namespace {

// Tensors cross the boundary as Fortran-ordered arrays: the library's flat
// first-index-fastest order is exactly numpy's 'F' layout.
using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;
using FBoolArray = py::array_t<bool, py::array::f_style | py::array::forcecast>;

DenseTensor tensor_from(const FArray& a) {
    if (a.ndim() < 1) {
        throw std::invalid_argument("expected an array of order >= 1");
    }
    std::vector<std::size_t> dims(a.ndim());
    for (py::ssize_t i = 0; i < a.ndim(); ++i) {
        dims[static_cast<std::size_t>(i)] = static_cast<std::size_t>(a.shape(i));
    }
    std::vector<double> data(a.data(), a.data() + a.size());
    return DenseTensor(std::move(dims), std::move(data));
}

py::array tensor_to(const DenseTensor& t) {
    std::vector<py::ssize_t> shape(t.dims().begin(), t.dims().end());
    py::array_t<double, py::array::f_style> out(shape);
    std::memcpy(out.mutable_data(), t.data(), sizeof(double) * t.size());
    return std::move(out);
}

IndexSet mask_from(const FBoolArray& a) {
    std::vector<std::size_t> dims(a.ndim());
    for (py::ssize_t i = 0; i < a.ndim(); ++i) {
        dims[static_cast<std::size_t>(i)] = static_cast<std::size_t>(a.shape(i));
    }
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(a.size()));
    const bool* src = a.data();
    for (py::ssize_t i = 0; i < a.size(); ++i) mask[static_cast<std::size_t>(i)] = src[i];
    return IndexSet(std::move(dims), std::move(mask));
}

py::array mask_to(const IndexSet& m) {
    std::vector<py::ssize_t> shape(m.dims().begin(), m.dims().end());
    py::array_t<bool, py::array::f_style> out(shape);
    bool* dst = out.mutable_data();
    for (std::size_t i = 0; i < m.size(); ++i) dst[i] = m.mask()[i] != 0;
    return std::move(out);
}

py::array stack_to(const ComplexSliceStack& s) {
    std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(s.i1),
                                   static_cast<py::ssize_t>(s.i2),
                                   static_cast<py::ssize_t>(s.i3())};
    py::array_t<std::complex<double>, py::array::f_style> out(shape);
    std::complex<double>* dst = out.mutable_data();
    const std::size_t per = s.i1 * s.i2;
    for (std::size_t i = 0; i < s.i3(); ++i) {
        std::memcpy(dst + i * per, s.slices[i].data(),
                    sizeof(std::complex<double>) * per);
    }
    return std::move(out);
}

ComplexSliceStack stack_from(
    const py::array_t<std::complex<double>, py::array::f_style | py::array::forcecast>&
        a) {
    if (a.ndim() != 3) {
        throw std::invalid_argument("expected a complex array of order 3");
    }
    ComplexSliceStack s;
    s.i1 = static_cast<std::size_t>(a.shape(0));
    s.i2 = static_cast<std::size_t>(a.shape(1));
    const std::size_t i3 = static_cast<std::size_t>(a.shape(2));
    const std::size_t per = s.i1 * s.i2;
    s.slices.reserve(i3);
    for (std::size_t i = 0; i < i3; ++i) {
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(s.i1),
                           static_cast<Eigen::Index>(s.i2));
        std::memcpy(m.data(), a.data() + i * per, sizeof(std::complex<double>) * per);
        s.slices.push_back(std::move(m));
    }
    return s;
}

WeightScheme scheme_from_string(const std::string& s) {
    if (s == "normalized") return WeightScheme::Normalized;
    if (s == "raw") return WeightScheme::Raw;
    throw std::invalid_argument("scheme must be 'normalized' or 'raw'");
}

LCParams params_from(double nu, double vartheta, double c, const std::string& scheme) {
    LCParams p;
    p.nu = nu;
    p.vartheta = vartheta;
    p.c = c;
    p.scheme = scheme_from_string(scheme);
    return p;
}

}  // namespace

PYBIND11_MODULE(_tjlc, m) {
    m.doc() = "Low-rank tensor completion via joint-rank weighted log-composite "
              "minimization";

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](std::vector<double> alpha, double tau, double eta, double nu,
                         double vartheta, double c, const std::string& scheme,
                         double epsilon, int max_iters, int threads) {
                 SolverConfig cfg;
                 cfg.alpha = std::move(alpha);
                 cfg.tau = tau;
                 cfg.eta = eta;
                 cfg.lc = params_from(nu, vartheta, c, scheme);
                 cfg.epsilon = epsilon;
                 cfg.max_iters = max_iters;
                 cfg.threads = threads;
                 return cfg;
             }),
             py::kw_only(), py::arg("alpha") = std::vector<double>{},
             py::arg("tau") = 10000.0, py::arg("eta") = 1.1, py::arg("nu") = 1.0,
             py::arg("vartheta") = 500.0, py::arg("c") = 0.8,
             py::arg("scheme") = "normalized", py::arg("epsilon") = 1e-4,
             py::arg("max_iters") = 500, py::arg("threads") = 1)
        .def_readwrite("alpha", &SolverConfig::alpha)
        .def_readwrite("tau", &SolverConfig::tau)
        .def_readwrite("eta", &SolverConfig::eta)
        .def_readwrite("epsilon", &SolverConfig::epsilon)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("threads", &SolverConfig::threads);

    py::class_<CompletionResult>(m, "CompletionResult")
        .def_property_readonly("x", [](const CompletionResult& r) { return tensor_to(r.x); })
        .def_readonly("iterations", &CompletionResult::iterations)
        .def_readonly("converged", &CompletionResult::converged)
        .def_readonly("re_history", &CompletionResult::re_history)
        .def_readonly("joint_rank_final", &CompletionResult::joint_rank_final);

    py::class_<MetricReport>(m, "MetricReport")
        .def_readonly("psnr", &MetricReport::psnr)
        .def_readonly("ssim", &MetricReport::ssim)
        .def_readonly("ergas", &MetricReport::ergas)
        .def_readonly("psnr_per_slice", &MetricReport::psnr_per_slice)
        .def_readonly("ssim_per_slice", &MetricReport::ssim_per_slice);

    m.def("frobenius_norm",
          [](const FArray& x) { return frobenius_norm(tensor_from(x)); });
    m.def("missing_rate", [](const FBoolArray& m_) { return missing_rate(mask_from(m_)); });
    m.def("project", [](const FArray& x, const FBoolArray& omega) {
        return tensor_to(project(tensor_from(x), mask_from(omega)));
    });
    m.def("unfold_mode_n", [](const FArray& x, std::size_t n) {
        return tensor_to(unfold_mode_n(tensor_from(x), n));
    });
    m.def("fold_mode_n",
          [](const FArray& m_, std::vector<std::size_t> dims, std::size_t n) {
              return tensor_to(fold_mode_n(tensor_from(m_), dims, n));
          });
    m.def("unfold_pair", [](const FArray& x, std::size_t l1, std::size_t l2) {
        return tensor_to(unfold_pair(tensor_from(x), l1, l2));
    });
    m.def("fold_pair", [](const FArray& y, std::vector<std::size_t> dims,
                          std::size_t l1, std::size_t l2) {
        return tensor_to(fold_pair(tensor_from(y), dims, l1, l2));
    });

    m.def("dft_mode3", [](const FArray& x) { return stack_to(dft_mode3(tensor_from(x))); });
    m.def("idft_mode3",
          [](const py::array_t<std::complex<double>,
                               py::array::f_style | py::array::forcecast>& a) {
              return tensor_to(idft_mode3(stack_from(a)));
          });
    m.def("bcirc", [](const FArray& x) { return tensor_to(bcirc(tensor_from(x))); });
    m.def("t_product", [](const FArray& a, const FArray& b) {
        return tensor_to(t_product(tensor_from(a), tensor_from(b)));
    });
    m.def("conj_transpose",
          [](const FArray& a) { return tensor_to(conj_transpose(tensor_from(a))); });
    m.def("identity_tensor", [](std::size_t n, std::size_t i3) {
        return tensor_to(identity_tensor(n, i3));
    });
    m.def("t_svd", [](const FArray& x) {
        const TSVDFactors f = t_svd(tensor_from(x));
        return py::make_tuple(tensor_to(f.u), tensor_to(f.s), tensor_to(f.v));
    });
    m.def(
        "tubal_rank",
        [](const FArray& x, double tol) {
            const DenseTensor t = tensor_from(x);
            return tol < 0.0 ? tubal_rank(t) : tubal_rank(t, tol);
        },
        py::arg("x"), py::arg("tol") = -1.0);
    m.def(
        "joint_rank",
        [](const FArray& x, double tol) { return joint_rank(tensor_from(x), tol); },
        py::arg("x"), py::arg("tol") = -1.0);

    m.def(
        "g_cap",
        [](double sigma, double nu, double vartheta) {
            LCParams p;
            p.nu = nu;
            p.vartheta = vartheta;
            return g_cap(sigma, p);
        },
        py::arg("sigma"), py::arg("nu"), py::arg("vartheta"));
    m.def(
        "scalar_prox",
        [](double y, double rho, double omega, double nu, double vartheta) {
            LCParams p;
            p.nu = nu;
            p.vartheta = vartheta;
            return scalar_prox(y, rho, omega, p);
        },
        py::arg("y"), py::arg("rho"), py::arg("omega"), py::arg("nu"),
        py::arg("vartheta"));
    m.def("cubic_real_roots", &cubic_real_roots, py::arg("b"), py::arg("c"),
          py::arg("d"));
    m.def(
        "tensor_prox",
        [](const FArray& y, double rho, double nu, double vartheta, double c,
           const std::string& scheme) {
            return tensor_to(
                tensor_prox(tensor_from(y), rho, params_from(nu, vartheta, c, scheme)));
        },
        py::arg("y"), py::arg("rho"), py::arg("nu") = 1.0, py::arg("vartheta") = 500.0,
        py::arg("c") = 0.8, py::arg("scheme") = "normalized");

    m.def("derive_betas", &derive_betas);
    m.def(
        "complete",
        [](const FArray& t, const FBoolArray& omega, const SolverConfig& cfg) {
            SolverConfig use = cfg;
            const DenseTensor tt = tensor_from(t);
            if (use.alpha.empty()) {
                use.alpha.assign(mode_pairs(tt.order()).size(), 1.0);
            }
            return run(tt, mask_from(omega), use);
        },
        py::arg("t"), py::arg("omega"), py::arg("config") = SolverConfig{});

    m.def(
        "psnr",
        [](const FArray& r, const FArray& c, double peak) {
            return psnr(tensor_from(r), tensor_from(c), peak);
        },
        py::arg("reference"), py::arg("candidate"), py::arg("peak") = 255.0);
    m.def(
        "ssim",
        [](const FArray& r, const FArray& c, double peak) {
            return ssim(tensor_from(r), tensor_from(c), peak);
        },
        py::arg("reference"), py::arg("candidate"), py::arg("peak") = 255.0);
    m.def(
        "ergas",
        [](const FArray& r, const FArray& c, const std::string& denominator) {
            return ergas(tensor_from(r), tensor_from(c),
                         denominator == "mean" ? ErgasDenominator::Mean
                                               : ErgasDenominator::MeanSquared);
        },
        py::arg("reference"), py::arg("candidate"), py::arg("denominator") = "mean2");
    m.def(
        "tensor_pqi",
        [](const FArray& r, const FArray& c, double peak) {
            return tensor_pqi(tensor_from(r), tensor_from(c), peak);
        },
        py::arg("reference"), py::arg("candidate"), py::arg("peak") = 255.0);

    m.def("read_tns", [](const std::string& path) -> py::object {
        const TnsValue v = read_tns(path);
        if (std::holds_alternative<DenseTensor>(v)) {
            return tensor_to(std::get<DenseTensor>(v));
        }
        return mask_to(std::get<IndexSet>(v));
    });
    m.def("write_tns", [](const py::array& a, const std::string& path) {
        if (py::isinstance<py::array_t<bool>>(a)) {
            write_tns(mask_from(FBoolArray::ensure(a)), path);
        } else {
            write_tns(tensor_from(FArray::ensure(a)), path);
        }
    });
    m.def(
        "generate_mask",
        [](std::vector<std::size_t> dims, double missing_rate, std::uint64_t seed) {
            return mask_to(generate_mask({seed, missing_rate, std::move(dims)}));
        },
        py::arg("dims"), py::arg("missing_rate"), py::arg("seed") = 0);
    m.def(
        "synth_low_tubal",
        [](std::array<std::size_t, 3> dims, std::size_t rank, std::uint64_t seed,
           double rms) { return tensor_to(synth_low_tubal(dims, rank, seed, rms)); },
        py::arg("dims"), py::arg("rank"), py::arg("seed") = 0, py::arg("rms") = 6.0);

    m.def("preset", [](const std::string& name) {
        const auto cfg = preset_config(name);
        if (!cfg) throw std::invalid_argument("unknown preset: " + name);
        return cfg->solver;
    });
    m.def("preset_names", &preset_names);
}
