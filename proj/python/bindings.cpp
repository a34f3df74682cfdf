#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "pds_forge/certificate.hpp"
#include "pds_forge/group.hpp"
#include "pds_forge/plane.hpp"
#include "pds_forge/searcher.hpp"
#include "pds_forge/sieve.hpp"

namespace py = pybind11;

namespace {

using pds::Int;

// Python ints are unbounded, so they cross the boundary as decimal text.
Int to_int(const py::handle& h) { return pds::parse_int(py::str(h).cast<std::string>()); }

py::int_ to_py(const Int& n) { return py::int_(py::str(pds::to_string(n))); }

pds::PdsParams to_params(const py::sequence& s)
{
    if (py::len(s) != 4) {
        throw pds::StructuralError("parameters must be (v, k, lambda, mu)");
    }
    return {to_int(s[0]), to_int(s[1]), to_int(s[2]), to_int(s[3])};
}

py::tuple params_to_py(const pds::PdsParams& P)
{
    return py::make_tuple(to_py(P.v), to_py(P.k), to_py(P.lambda), to_py(P.mu));
}

py::object json_to_py(const pds::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

pds::Json py_to_json(const py::handle& o)
{
    return pds::Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

pds::GroupSpec to_group(const py::handle& g)
{
    if (py::isinstance<py::str>(g)) {
        return pds::GroupSpec::parse(g.cast<std::string>());
    }
    return pds::GroupSpec(g.cast<std::vector<std::uint64_t>>());
}

py::list sieve(const py::handle& v, unsigned jobs)
{
    const Int order = to_int(v);
    std::vector<pds::PdsParams> found;
    {
        py::gil_scoped_release release;
        found = pds::enumerate_feasible(order, jobs);
    }
    py::list out;
    for (const auto& P : found) {
        out.append(params_to_py(P));
    }
    return out;
}

py::object certify(const py::handle& p, bool all_a)
{
    const Int prime = to_int(p);
    pds::Certificate cert;
    {
        py::gil_scoped_release release;
        cert = pds::certify(prime, {all_a});
    }
    return json_to_py(pds::to_json(cert));
}

py::dict replay(const py::handle& cert)
{
    const auto c = pds::certificate_from_json(py_to_json(cert));
    pds::ReplayReport r;
    {
        py::gil_scoped_release release;
        r = pds::replay(c);
    }
    py::dict out;
    out["ok"] = r.ok;
    out["steps_checked"] = r.steps_checked;
    out["mismatches"] = r.mismatches;
    out["verdict"] = pds::to_string(r.recomputed_verdict);
    return out;
}

py::list search(const py::handle& group, const py::sequence& params, bool prune_lmt, std::optional<std::uint64_t> sylow,
                unsigned jobs)
{
    const auto G = to_group(group);
    const auto P = to_params(params);
    pds::SearchOptions opt;
    opt.prune_lmt = prune_lmt;
    opt.jobs = jobs;
    if (sylow) {
        opt.filter = pds::sylow_intersection_filter(G, P, *sylow);
    }
    pds::SearchResult res;
    {
        py::gil_scoped_release release;
        res = pds::search(G, P, opt);
    }
    py::list out;
    for (const auto& D : res.sets) {
        out.append(D.members);
    }
    return out;
}

py::dict verify(const py::handle& group, const std::vector<std::uint64_t>& members, const py::sequence& params)
{
    const auto D = pds::make_candidate(to_group(group), members);
    const auto v = pds::verify_pds(D, to_params(params));
    py::dict out;
    out["valid"] = v.valid;
    out["trivial"] = v.trivial;
    out["order_matches"] = v.order_matches;
    out["size_matches"] = v.size_matches;
    out["identity_excluded"] = v.identity_excluded;
    out["inverse_closed"] = v.inverse_closed;
    out["counts_match"] = v.counts_match;
    out["witness"] = v.witness ? py::object(py::int_(*v.witness)) : py::object(py::none());
    return out;
}

py::dict plane(std::uint64_t p)
{
    pds::PlaneStats s;
    {
        py::gil_scoped_release release;
        s = pds::build_plane(p).verify();
    }
    py::dict out;
    out["points"] = s.points;
    out["lines"] = s.lines;
    out["points_per_line"] = py::make_tuple(s.min_points_per_line, s.max_points_per_line);
    out["lines_per_point"] = py::make_tuple(s.min_lines_per_point, s.max_lines_per_point);
    out["bad_pairs"] = s.bad_pairs;
    out["is_projective_plane"] = s.is_projective_plane(p);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Partial difference set sieve, certifier and search";

    py::register_exception<pds::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<pds::StructuralError>(m, "StructuralError", PyExc_ValueError);

    m.def("sieve", &sieve, py::arg("v"), py::arg("jobs") = 1,
          "Feasible (v, k, lambda, mu) quadruples for the given order.");
    m.def("certify", &certify, py::arg("p"), py::arg("all_a") = false,
          "Nonexistence certificate for order 8p^3, as a JSON-compatible dict.");
    m.def("replay", &replay, py::arg("certificate"));
    m.def("search", &search, py::arg("group"), py::arg("params"), py::arg("prune_lmt") = true,
          py::arg("sylow") = py::none(), py::arg("jobs") = 1,
          "Every regular PDS with the given parameters, as sorted element-index lists.");
    m.def("verify", &verify, py::arg("group"), py::arg("members"), py::arg("params"));
    m.def("plane", &plane, py::arg("p"));
}
