use anyhow::{bail, Result};
use clap::ValueEnum;

use zecap::channels::channel_from_cliques;
use zecap::graphs::io::{to_dimacs, to_json};
use zecap::graphs::Graph;
use zecap::root_lattice::{orthonormal_representation, representation_table, table_to_csv, table_to_json};
use zecap::root_systems::{build_root_graph, e8_symplectic_model, RootSystem};
use zecap::symplectic::build_sp_graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dimacs,
    Json,
    Csv,
}

pub fn export(name: &str, format: ExportFormat) -> Result<String> {
    match name {
        "e8-rays" | "g2" => {
            let system = if name == "g2" { RootSystem::G2 } else { RootSystem::E8 };
            let rays = build_root_graph(system)?;
            match format {
                ExportFormat::Json => Ok(rays.to_json() + "\n"),
                _ => graph_text(&rays.graph, format),
            }
        }
        "e7-table" => {
            let rows = representation_table(&orthonormal_representation()?)?;
            match format {
                ExportFormat::Json => Ok(table_to_json(&rows) + "\n"),
                ExportFormat::Csv => Ok(table_to_csv(&rows)?),
                ExportFormat::Dimacs => bail!("e7-table is a table; use json or csv"),
            }
        }
        "sp6-channel" => {
            let sp = build_sp_graph(3)?;
            let c = channel_from_cliques(sp.graph(), 7)?;
            match format {
                ExportFormat::Json => Ok(c.channel.to_json() + "\n"),
                ExportFormat::Csv => Ok(c.channel.to_csv()?),
                ExportFormat::Dimacs => bail!("sp6-channel is a channel; use json or csv"),
            }
        }
        _ => graph_text(&named_graph(name)?, format),
    }
}

fn named_graph(name: &str) -> Result<Graph> {
    Ok(match name {
        "sp2" => build_sp_graph(1)?.into_graph(),
        "sp4" => build_sp_graph(2)?.into_graph(),
        "sp6" => build_sp_graph(3)?.into_graph(),
        "sp8" => build_sp_graph(4)?.into_graph(),
        "e8-model" => e8_symplectic_model()?.graph,
        "c5" => Graph::cycle(5),
        other => bail!(
            "unknown name {other:?}; expected one of sp2, sp4, sp6, sp8, e8-rays, e8-model, g2, c5, e7-table, sp6-channel"
        ),
    })
}

fn graph_text(g: &Graph, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Dimacs => Ok(to_dimacs(g)),
        ExportFormat::Json => Ok(to_json(g) + "\n"),
        ExportFormat::Csv => bail!("graphs export as dimacs or json"),
    }
}
