#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fbawgn/exponents.hpp"
#include "fbawgn/gauss.hpp"
#include "fbawgn/shell.hpp"
#include "fbawgn/simulate.hpp"
#include "fbawgn/waterfill.hpp"

namespace py = pybind11;
using namespace fbawgn;

namespace {

py::dict bound_result_dict(const BoundResult& r) {
  py::dict d;
  d["total_nats"] = r.total_nats;
  d["capacity_term"] = r.capacity_term;
  d["dispersion_term"] = r.dispersion_term;
  d["third_order_term"] = r.third_order_term;
  d["constant_term"] = r.constant_term;
  for (const auto& [k, v] : r.extras) d[k.c_str()] = v;
  if (r.mc_stderr) d["mc_stderr"] = *r.mc_stderr;
  if (r.provenance) {
    d["seed"] = r.provenance->seed;
    d["trials"] = r.provenance->trials;
  }
  if (!r.convention.empty()) d["convention"] = r.convention;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fbawgn, m) {
  m.doc() =
      "Finite-blocklength bounds and Monte Carlo simulation for the "
      "power-constrained AWGN channel";

  py::register_exception<VacuousBoundError>(m, "VacuousBoundError");
  py::register_exception<sim::BracketError>(m, "BracketError");

  // gauss
  m.def("std_normal_cdf", &gauss::std_normal_cdf, py::arg("a"));
  m.def("std_normal_cdf_inv", &gauss::std_normal_cdf_inv, py::arg("eps"));
  m.def("reg_inc_beta", &gauss::reg_inc_beta, py::arg("x"), py::arg("a"),
        py::arg("b"));
  m.def("log_gamma", &gauss::log_gamma, py::arg("x"));
  m.def(
      "capacity", [](double p) { return gauss::capacity(SnrPoint(p)); },
      py::arg("snr"), "Channel capacity in nats per use");
  m.def(
      "dispersion", [](double p) { return gauss::dispersion(SnrPoint(p)); },
      py::arg("snr"), "Channel dispersion in nats^2 per use");
  m.def(
      "third_abs_moment",
      [](double p) { return gauss::third_abs_moment(SnrPoint(p)); },
      py::arg("snr"));

  py::class_<gauss::NormalApproxTerms>(m, "NormalApproxTerms")
      .def_readonly("n", &gauss::NormalApproxTerms::n)
      .def_readonly("eps", &gauss::NormalApproxTerms::eps)
      .def_readonly("capacity_term", &gauss::NormalApproxTerms::capacity_term)
      .def_readonly("dispersion_term", &gauss::NormalApproxTerms::dispersion_term)
      .def_readonly("third_order_term", &gauss::NormalApproxTerms::third_order_term)
      .def_readonly("total", &gauss::NormalApproxTerms::total)
      .def("__repr__", [](const gauss::NormalApproxTerms& t) {
        return "NormalApproxTerms(total=" + std::to_string(t.total) + " nats)";
      });
  m.def(
      "normal_approximation",
      [](std::int64_t n, double eps, double snr, bool third) {
        return gauss::normal_approximation(n, eps, SnrPoint(snr), third);
      },
      py::arg("n"), py::arg("eps"), py::arg("snr"),
      py::arg("include_third_order") = false);

  // shell
  m.def("sphere_surface_area_log", &shell::sphere_surface_area_log,
        py::arg("n"), py::arg("r"));
  m.def("shell_mode", &shell::shell_mode, py::arg("ps"));
  m.def("shell_mode_finite", &shell::shell_mode_finite, py::arg("ps"),
        py::arg("n"));
  m.def("shell_normalizer_log", &shell::shell_normalizer_log, py::arg("n"),
        py::arg("p"), py::arg("s"));
  m.def(
      "shell_density",
      [](double u, int n, double p, double s) {
        return shell::shell_density(u, shell::ShellDensitySpec(n, p, s));
      },
      py::arg("u"), py::arg("n"), py::arg("p"), py::arg("s"));

  py::class_<shell::LaplaceReport>(m, "LaplaceReport")
      .def_property_readonly("p", &shell::LaplaceReport::p)
      .def_property_readonly("s", &shell::LaplaceReport::s)
      .def_property_readonly("u_star", &shell::LaplaceReport::u_star)
      .def_property_readonly("alpha_at_mode", &shell::LaplaceReport::alpha_at_mode)
      .def_property_readonly("alpha_second_deriv",
                             &shell::LaplaceReport::alpha_second_deriv)
      .def_property_readonly("l_bound", &shell::LaplaceReport::l_bound)
      .def_property_readonly("l_bound_from_mode",
                             &shell::LaplaceReport::l_bound_from_mode)
      .def("u_star_n", &shell::LaplaceReport::u_star_n, py::arg("n"))
      .def("sup_ratio", &shell::LaplaceReport::sup_ratio, py::arg("n"));
  m.def("laplace_sup_bound", &shell::laplace_sup_bound, py::arg("p"),
        py::arg("s"));
  m.def("slice_prob_bound", &shell::slice_prob_bound, py::arg("n"),
        py::arg("p"), py::arg("s"), py::arg("mu"));
  m.def("metric_tail_k", &shell::metric_tail_k, py::arg("p"));
  m.def("metric_tail_g", &shell::metric_tail_g, py::arg("p"));
  m.def("metric_tail_bound", &shell::metric_tail_bound, py::arg("n"),
        py::arg("p"), py::arg("t"));

  // simulation
  py::class_<sim::SphereCodebook>(m, "SphereCodebook")
      .def_property_readonly("n", &sim::SphereCodebook::n)
      .def_property_readonly("m", &sim::SphereCodebook::m)
      .def_property_readonly("p", &sim::SphereCodebook::p)
      .def_property_readonly("seed", &sim::SphereCodebook::seed)
      .def("codeword", [](const sim::SphereCodebook& b, int i) {
        if (i < 0 || i >= b.m()) throw py::index_error();
        const auto w = b.codeword(i);
        return std::vector<double>(w.begin(), w.end());
      });
  m.def("generate_codebook", &sim::generate_codebook, py::arg("n"),
        py::arg("m"), py::arg("p"), py::arg("seed"));
  m.def("save_codebook_binary", &sim::save_codebook_binary, py::arg("book"),
        py::arg("path"));
  m.def("save_codebook_csv", &sim::save_codebook_csv, py::arg("book"),
        py::arg("path"));
  m.def("load_codebook", &sim::load_codebook, py::arg("path"));
  m.def(
      "decode_max_inner",
      [](const sim::SphereCodebook& b, const std::vector<double>& y) {
        return sim::decode_max_inner(b, y);
      },
      py::arg("book"), py::arg("y"));
  m.def("pairwise_tail_exact", &sim::pairwise_tail_exact, py::arg("n"),
        py::arg("c"));
  m.def("pairwise_tail_log", &sim::pairwise_tail_log, py::arg("n"),
        py::arg("c"));
  m.def("log_induced_output_density", &sim::log_induced_output_density,
        py::arg("n"), py::arg("p"), py::arg("s"));
  m.def("g_exact", &sim::g_exact, py::arg("n"), py::arg("p"), py::arg("s"),
        py::arg("t"));

  py::class_<sim::RcuEstimate>(m, "RcuEstimate")
      .def_readonly("n", &sim::RcuEstimate::n)
      .def_readonly("m_log", &sim::RcuEstimate::m_log)
      .def_readonly("eps_hat", &sim::RcuEstimate::eps_hat)
      .def_readonly("stderr", &sim::RcuEstimate::stderr_est)
      .def_readonly("trials", &sim::RcuEstimate::trials)
      .def_readonly("seed", &sim::RcuEstimate::seed)
      .def("__repr__", [](const sim::RcuEstimate& e) {
        return "RcuEstimate(eps_hat=" + std::to_string(e.eps_hat) + ")";
      });
  m.def("rcu_error_estimate", &sim::rcu_error_estimate, py::arg("n"),
        py::arg("m_log"), py::arg("p"), py::arg("trials"), py::arg("seed"),
        py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "rcu_max_rate",
      [](int n, double eps, double p, std::uint64_t trials, double tol,
         std::uint64_t seed, unsigned workers) {
        BoundResult r;
        {
          py::gil_scoped_release release;
          r = sim::rcu_max_rate(n, eps, p, trials, tol, seed, workers);
        }
        return bound_result_dict(r);
      },
      py::arg("n"), py::arg("eps"), py::arg("p"), py::arg("trials"),
      py::arg("tol"), py::arg("seed"), py::arg("workers") = 0);

  py::class_<sim::TypicalSetEstimate>(m, "TypicalSetEstimate")
      .def_readonly("prob_complement", &sim::TypicalSetEstimate::prob_complement)
      .def_readonly("stderr", &sim::TypicalSetEstimate::stderr_est)
      .def_readonly("trials", &sim::TypicalSetEstimate::trials)
      .def_readonly("seed", &sim::TypicalSetEstimate::seed);
  m.def(
      "typical_set_prob",
      [](int n, double p, double delta, std::uint64_t trials,
         std::uint64_t seed, unsigned workers) {
        const sim::TypicalSetSpec spec =
            delta > 0.0 ? sim::TypicalSetSpec(n, p, delta)
                        : sim::TypicalSetSpec::with_default_delta(n, p);
        py::gil_scoped_release release;
        return sim::typical_set_prob(spec, trials, seed, workers);
      },
      py::arg("n"), py::arg("p"), py::arg("delta") = 0.0,
      py::arg("trials") = 100000, py::arg("seed") = 1, py::arg("workers") = 0);
  m.def("output_density_ratio_bound", &sim::output_density_ratio_bound,
        py::arg("n"), py::arg("p"), py::arg("delta"), py::arg("grid_points"));
  m.def(
      "achievable_log_m",
      [](int n, double eps, double p, std::uint64_t trials, std::uint64_t seed,
         unsigned workers, int grid_points, bool epsilon_backoff) {
        sim::AchievableOptions opt;
        opt.trials = trials;
        opt.seed = seed;
        opt.workers = workers;
        opt.grid_points = grid_points;
        opt.epsilon_backoff = epsilon_backoff;
        BoundResult r;
        {
          py::gil_scoped_release release;
          r = sim::achievable_log_m(n, eps, p, opt);
        }
        return bound_result_dict(r);
      },
      py::arg("n"), py::arg("eps"), py::arg("p"), py::arg("trials") = 200000,
      py::arg("seed") = 1, py::arg("workers") = 0, py::arg("grid_points") = 33,
      py::arg("epsilon_backoff") = true);

  // exponents
  m.def(
      "shannon_g",
      [](double phi, double p) { return exponents::shannon_g(phi, SnrPoint(p)); },
      py::arg("phi"), py::arg("snr"));
  m.def(
      "shannon_f",
      [](double phi, double p) { return exponents::shannon_f(phi, SnrPoint(p)); },
      py::arg("phi"), py::arg("snr"));
  m.def(
      "sp_exponent",
      [](double rate, double p) {
        return exponents::sp_exponent(rate, SnrPoint(p));
      },
      py::arg("rate"), py::arg("snr"));
  m.def("cone_angle", &exponents::cone_angle, py::arg("rate"), py::arg("n"));
  m.def(
      "prefactor_exponent",
      [](double rate, double p, double h) {
        return exponents::prefactor_exponent(rate, SnrPoint(p), h);
      },
      py::arg("rate"), py::arg("snr"), py::arg("h") = 1e-4);
  m.def("rate_from_angle", &exponents::rate_from_angle, py::arg("phi"));

  // water-filling
  py::class_<wf::PowerAllocation>(m, "PowerAllocation")
      .def_readonly("noise", &wf::PowerAllocation::noise)
      .def_readonly("total_power", &wf::PowerAllocation::total_power)
      .def_readonly("nu", &wf::PowerAllocation::nu)
      .def_readonly("powers", &wf::PowerAllocation::powers)
      .def_readonly("active_set", &wf::PowerAllocation::active_set);
  m.def("waterfill", &wf::waterfill, py::arg("noise"), py::arg("total_power"));
  m.def("parallel_slice_bound", &wf::parallel_slice_bound, py::arg("alloc"),
        py::arg("s"), py::arg("n"), py::arg("mu"));
  m.def(
      "parallel_normal_approximation",
      [](std::int64_t n, double eps, const std::vector<double>& noise,
         double total_power) {
        return bound_result_dict(
            wf::parallel_normal_approximation(n, eps, noise, total_power));
      },
      py::arg("n"), py::arg("eps"), py::arg("noise"), py::arg("total_power"));

#ifdef FBAWGN_VERSION
  m.attr("__version__") = FBAWGN_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
