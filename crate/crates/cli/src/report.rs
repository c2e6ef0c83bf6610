use std::fmt::Write;

use eon_core::aco::{solve_traced, SolveOutcome, SolveResult, TraceRecord};
use eon_core::auxgraph::{build_auxiliary_graph, continuity_reduction_stats, contiguity_reduction_stats};
use eon_core::model::{NetworkDescription, NetworkState, Request};
use eon_core::solvers::Solver;

pub fn format_outcome(net: &NetworkDescription, solver: &Solver, outcome: &SolveOutcome) -> String {
    let topo = &net.topology;
    let mut out = String::new();
    match &outcome.result {
        SolveResult::Allocated(a) => {
            let name = net.modulation.level(a.level).map(|l| l.name.as_str()).unwrap_or("?");
            let length = topo.path_length(&a.path).unwrap_or(f64::NAN);
            let _ = writeln!(out, "solver: {}", solver.kind);
            let _ = writeln!(out, "path: {}", topo.format_path(&a.path));
            let _ = writeln!(out, "length_km: {length}");
            let _ = writeln!(out, "level: {} ({name})", a.level);
            let _ = writeln!(out, "start: {}", a.start);
            let _ = writeln!(out, "slots: {}", a.slots);
            if let Some(f) = outcome.best_fitness {
                let (num, den) = f.ratio();
                let _ = writeln!(out, "fitness: {f} ({num}/{den})");
            }
            let _ = writeln!(out, "iterations: {}", outcome.iterations);
            let _ = writeln!(out, "ants: {}", outcome.ants);
        }
        SolveResult::Blocked(reason) => {
            let _ = writeln!(out, "Blocked: {reason}");
        }
    }
    out
}

fn trace_line(net: &NetworkDescription, rec: &TraceRecord) -> String {
    let a = &rec.ant;
    let fitness = a.fitness.map(|f| f.to_string()).unwrap_or_else(|| "-".into());
    format!(
        "{} {} {} {} {} {} {} {} {}",
        rec.iteration,
        a.label,
        a.role.as_str(),
        net.topology.format_path(&a.tour),
        a.start,
        a.level,
        a.delta_f,
        a.status.as_str(),
        fitness
    )
}

/// Auxiliary-graph table, reduction statistics and the colony's per-ant trace.
pub fn explain(net: &NetworkDescription, state: &NetworkState, request: &Request, solver: &Solver, seed: u64) -> String {
    let topo = &net.topology;
    let aux = build_auxiliary_graph(state, request, &net.modulation);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "request: {} -> {} {} Gbps",
        topo.label(request.source),
        topo.label(request.destination),
        request.rate_gbps
    );
    let per_level: Vec<String> = aux
        .slots_per_level()
        .iter()
        .enumerate()
        .map(|(i, fs)| format!("{}:{fs}", i + 1))
        .collect();
    let _ = writeln!(out, "slots per level: {}", per_level.join(" "));
    let _ = writeln!(out, "source degree: {}", topo.degree(request.source));
    let _ = writeln!(out, "effective degree: {}", aux.effective_degree());
    let _ = writeln!(out, "auxiliary links: {} of {} unoccupied", aux.len(), aux.unoccupied_count());
    let _ = writeln!(out, "occupancy reduction: {:.2}%", 100.0 * aux.occupancy_reduction());
    let c = contiguity_reduction_stats(net.slots, aux.slots_per_level());
    let _ = writeln!(
        out,
        "contiguity reduction: {:.2}% ({} contiguous of {:.6e} windows)",
        100.0 * c.reduction,
        c.with,
        c.without
    );
    let deg = topo.degree(request.source).max(1);
    let _ = writeln!(
        out,
        "continuity reduction: {:.2}% ({} of {} links carry aux links)",
        100.0 * continuity_reduction_stats(topo.link_count(), deg),
        deg,
        topo.link_count()
    );
    let _ = writeln!(out, "# neighbor level start slots");
    out.push_str(&aux.dump());

    let (outcome, trace) = solve_traced(state, request, &net.modulation, &solver.aco.with_seed(seed));
    let _ = writeln!(out, "# iteration ant role tour start level delta_f status fitness");
    if aux.is_empty() {
        let _ = writeln!(out, "terminated before the first iteration: no auxiliary links");
    }
    for rec in &trace {
        let _ = writeln!(out, "{}", trace_line(net, rec));
    }
    out.push_str(&format_outcome(net, solver, &outcome));
    out
}
