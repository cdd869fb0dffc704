#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvkit/bench.hpp"
#include "cvkit/bsm.hpp"
#include "cvkit/datagen.hpp"
#include "cvkit/geo.hpp"
#include "cvkit/partition.hpp"
#include "cvkit/spat/codec.hpp"
#include "cvkit/spat/emulator.hpp"

namespace py = pybind11;

namespace {

// End-to-end convenience: distance matrix -> threshold -> closure -> labels.
cvkit::PartitionAssignment partition_timeframe(const cvkit::Timeframe& frame,
                                               double range_m) {
    const cvkit::DistanceMatrix d = cvkit::distance_matrix(frame);
    auto [closed, trace] = cvkit::multihop_closure(
        cvkit::connectivity_from_distances(d, range_m));
    return cvkit::extract_partitions(closed);
}

}  // namespace

PYBIND11_MODULE(cvkit, m) {
    m.doc() = "Connected-vehicle toolkit: BSM parsing, multi-hop connectivity "
              "partitioning, synthetic data generation, and the SPaT codec.";

    py::register_exception<cvkit::Error>(m, "Error");

    // --- BSM model ---
    py::class_<cvkit::BsmRecord>(m, "BsmRecord")
        .def(py::init<>())
        .def(py::init([](std::string vehicle_id, std::int64_t timestamp, double latitude,
                         double longitude, double speed) {
                 return cvkit::BsmRecord{std::move(vehicle_id), timestamp, latitude,
                                         longitude, speed};
             }),
             py::arg("vehicle_id"), py::arg("timestamp"), py::arg("latitude"),
             py::arg("longitude"), py::arg("speed"))
        .def_readwrite("vehicle_id", &cvkit::BsmRecord::vehicle_id)
        .def_readwrite("timestamp", &cvkit::BsmRecord::timestamp)
        .def_readwrite("latitude", &cvkit::BsmRecord::latitude)
        .def_readwrite("longitude", &cvkit::BsmRecord::longitude)
        .def_readwrite("speed", &cvkit::BsmRecord::speed)
        .def("__eq__", [](const cvkit::BsmRecord& a, const cvkit::BsmRecord& b) { return a == b; })
        .def("__repr__", [](const cvkit::BsmRecord& r) {
            return "BsmRecord(" + r.vehicle_id + ", t=" + std::to_string(r.timestamp) + ")";
        });

    py::class_<cvkit::Timeframe>(m, "Timeframe")
        .def(py::init<>())
        .def_readwrite("timestamp", &cvkit::Timeframe::timestamp)
        .def_readwrite("vehicles", &cvkit::Timeframe::vehicles)
        .def("__len__", [](const cvkit::Timeframe& f) { return f.vehicles.size(); });

    m.def("parse_bsm_csv", [](const std::string& text) { return cvkit::parse_bsm_csv(text); },
          py::arg("text"), "Parse 5-column BSM CSV text into records.");
    m.def("serialize_bsm_csv",
          py::overload_cast<const std::vector<cvkit::BsmRecord>&>(&cvkit::serialize_bsm_csv),
          py::arg("records"));
    m.def("group_into_timeframes", &cvkit::group_into_timeframes, py::arg("records"),
          "Bucket records into timestamp-ordered timeframes.");

    // --- geo ---
    py::class_<cvkit::GeoPoint>(m, "GeoPoint")
        .def(py::init<double, double>(), py::arg("latitude"), py::arg("longitude"))
        .def_readwrite("latitude", &cvkit::GeoPoint::latitude)
        .def_readwrite("longitude", &cvkit::GeoPoint::longitude);

    py::class_<cvkit::GeoRect>(m, "GeoRect")
        .def(py::init<double, double, double, double>(), py::arg("lat_min"),
             py::arg("lat_max"), py::arg("lon_min"), py::arg("lon_max"))
        .def_property_readonly("lat_min", &cvkit::GeoRect::lat_min)
        .def_property_readonly("lat_max", &cvkit::GeoRect::lat_max)
        .def_property_readonly("lon_min", &cvkit::GeoRect::lon_min)
        .def_property_readonly("lon_max", &cvkit::GeoRect::lon_max)
        .def("contains", &cvkit::GeoRect::contains, py::arg("point"));

    py::class_<cvkit::DistanceMatrix>(m, "DistanceMatrix")
        .def("__len__", &cvkit::DistanceMatrix::size)
        .def("size", &cvkit::DistanceMatrix::size)
        .def("at", &cvkit::DistanceMatrix::at, py::arg("i"), py::arg("j"));

    m.def("haversine_distance", &cvkit::haversine_distance, py::arg("a"), py::arg("b"),
          "Great-circle distance in meters.");
    m.def("rectangle_area_km2", &cvkit::rectangle_area_km2, py::arg("rect"));
    m.def("distance_matrix",
          [](const cvkit::Timeframe& frame) { return cvkit::distance_matrix(frame); },
          py::arg("frame"));

    // --- partitioning ---
    py::class_<cvkit::ConnectivityMatrix>(m, "ConnectivityMatrix")
        .def(py::init<std::size_t>(), py::arg("n"))
        .def("__len__", &cvkit::ConnectivityMatrix::size)
        .def("size", &cvkit::ConnectivityMatrix::size)
        .def("get", &cvkit::ConnectivityMatrix::get, py::arg("i"), py::arg("j"))
        .def("set_symmetric", &cvkit::ConnectivityMatrix::set_symmetric, py::arg("i"),
             py::arg("j"))
        .def("all_true", &cvkit::ConnectivityMatrix::all_true)
        .def("__eq__", [](const cvkit::ConnectivityMatrix& a, const cvkit::ConnectivityMatrix& b) {
            return a == b;
        });

    py::class_<cvkit::ClosureTrace>(m, "ClosureTrace")
        .def_readonly("squarings", &cvkit::ClosureTrace::squarings)
        .def_readonly("converged", &cvkit::ClosureTrace::converged);

    py::class_<cvkit::PartitionAssignment>(m, "PartitionAssignment")
        .def_readonly("labels", &cvkit::PartitionAssignment::labels)
        .def_readonly("partition_count", &cvkit::PartitionAssignment::partition_count)
        .def("__eq__", [](const cvkit::PartitionAssignment& a,
                          const cvkit::PartitionAssignment& b) { return a == b; });

    m.def("connectivity_from_distances", &cvkit::connectivity_from_distances,
          py::arg("distances"), py::arg("range_m"));
    m.def("boolean_square", &cvkit::boolean_square, py::arg("matrix"));
    m.def("multihop_closure", &cvkit::multihop_closure, py::arg("matrix"),
          "Returns (closed_matrix, trace).");
    m.def("extract_partitions", &cvkit::extract_partitions, py::arg("closed"));
    m.def("union_find_partitions", &cvkit::union_find_partitions, py::arg("distances"),
          py::arg("range_m"));
    m.def("partition_timeframe", &partition_timeframe, py::arg("frame"), py::arg("range_m"),
          "Distance matrix -> threshold -> closure -> partition labels in one call.");

    // --- data generation ---
    py::class_<cvkit::GenConfig>(m, "GenConfig")
        .def(py::init<>())
        .def_readwrite("n_vehicles", &cvkit::GenConfig::n_vehicles)
        .def_readwrite("rect", &cvkit::GenConfig::rect)
        .def_readwrite("n_timeframes", &cvkit::GenConfig::n_timeframes)
        .def_readwrite("seed", &cvkit::GenConfig::seed)
        .def_readwrite("max_file_kb", &cvkit::GenConfig::max_file_kb);

    m.def("ann_arbor_rect", &cvkit::ann_arbor_rect);
    m.def("generate_timeframe", &cvkit::generate_timeframe, py::arg("config"), py::arg("t"));
    m.def("generate_dataset", &cvkit::generate_dataset, py::arg("config"));

    // --- benchmarking ---
    py::class_<cvkit::DensitySample>(m, "DensitySample")
        .def_readonly("n", &cvkit::DensitySample::n)
        .def_readonly("density", &cvkit::DensitySample::density)
        .def_readonly("mean_partitions", &cvkit::DensitySample::mean_partitions)
        .def_readonly("trials", &cvkit::DensitySample::trials);

    m.def("fit_loglog_slope", &cvkit::fit_loglog_slope, py::arg("points"));
    m.def("partition_density_sweep", &cvkit::partition_density_sweep, py::arg("ns"),
          py::arg("trials"), py::arg("range_m"), py::arg("seed"),
          py::arg("parallel_trials") = false);

    // --- SPaT codec ---
    auto spat = m.def_submodule("spat", "NTCIP SPaT datagram codec");

    py::enum_<cvkit::spat::PhaseColor>(spat, "PhaseColor")
        .value("RED", cvkit::spat::PhaseColor::Red)
        .value("YELLOW", cvkit::spat::PhaseColor::Yellow)
        .value("GREEN", cvkit::spat::PhaseColor::Green);

    py::class_<cvkit::spat::IntersectionState>(spat, "IntersectionState")
        .def(py::init<>())
        .def_readwrite("phases", &cvkit::spat::IntersectionState::phases)
        .def("__eq__", [](const cvkit::spat::IntersectionState& a,
                          const cvkit::spat::IntersectionState& b) { return a == b; })
        .def("__repr__", [](const cvkit::spat::IntersectionState& s) {
            return "IntersectionState(" + cvkit::spat::state_letters(s) + ")";
        });

    py::class_<cvkit::spat::SpatFrame>(spat, "SpatFrame")
        .def_property_readonly("raw",
                               [](const cvkit::spat::SpatFrame& f) {
                                   return py::bytes(
                                       reinterpret_cast<const char*>(f.raw.data()),
                                       f.raw.size());
                               })
        .def_readonly("red_bits", &cvkit::spat::SpatFrame::red_bits)
        .def_readonly("yellow_bits", &cvkit::spat::SpatFrame::yellow_bits)
        .def_readonly("green_bits", &cvkit::spat::SpatFrame::green_bits)
        .def_readonly("has_pedestrian_bytes", &cvkit::spat::SpatFrame::has_pedestrian_bytes);

    spat.def("parse_spat_packet", [](py::bytes data) {
        const std::string_view view = data;
        return cvkit::spat::parse_spat_packet(
            {reinterpret_cast<const std::uint8_t*>(view.data()), view.size()});
    });
    spat.def("interpret_state", &cvkit::spat::interpret_state, py::arg("frame"));
    spat.def("consistency_check", &cvkit::spat::consistency_check, py::arg("frame"));
    spat.def("encode_spat_packet",
             [](const cvkit::spat::IntersectionState& state, bool pedestrian) {
                 const auto bytes = cvkit::spat::encode_spat_packet(state, pedestrian);
                 return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
             },
             py::arg("state"), py::arg("pedestrian") = false);
    spat.def("state_letters", &cvkit::spat::state_letters, py::arg("state"));
    spat.def("default_cycle",
             [](int green_dwell_ds, int yellow_dwell_ds) {
                 std::vector<std::pair<cvkit::spat::IntersectionState, int>> out;
                 for (const auto& phase :
                      cvkit::spat::default_cycle(green_dwell_ds, yellow_dwell_ds)) {
                     out.emplace_back(phase.state, phase.dwell_ds);
                 }
                 return out;
             },
             py::arg("green_dwell_ds") = 30, py::arg("yellow_dwell_ds") = 10,
             "The 8-state phase-pair rotation as (state, dwell_ds) tuples.");

    spat.attr("FRAME_BYTES") = cvkit::spat::kFrameBytes;
    spat.attr("FRAME_BYTES_PEDESTRIAN") = cvkit::spat::kFrameBytesPedestrian;
    spat.attr("RED_OFFSET") = cvkit::spat::kRedOffset;
    spat.attr("YELLOW_OFFSET") = cvkit::spat::kYellowOffset;
    spat.attr("GREEN_OFFSET") = cvkit::spat::kGreenOffset;
}
