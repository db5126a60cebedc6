use std::collections::HashMap;
use std::path::Path;

use fullspec::graph::{
    erdos_renyi, generate_class_graph, load_edge_list, named, random_connected, Graph, GraphJson,
    Partition,
};

use crate::CliError;

/// Reads an edge list, or a graph JSON document when the extension is `.json`.
pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        let j: GraphJson = serde_json::from_str(&text)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        Ok(Graph::try_from(j)?)
    } else {
        Ok(load_edge_list(&text)?.graph)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(['+', ';'])
        .map(|x| x.trim().parse().map_err(|_| CliError::usage(format!("bad {what} entry `{x}`"))))
        .collect()
}

/// Parses `name[:key=value,...]`, e.g. `cycle:n=6`, `er:n=8,p=0.35`,
/// `class:sizes=10+10,h=0.5,deg=4`, or `frucht`. A bare value after the
/// colon is taken as `n`.
pub fn generate_graph(spec: &str, seed: u64) -> Result<Graph, CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut kv: HashMap<&str, &str> = HashMap::new();
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        match part.split_once('=') {
            Some((k, v)) => kv.insert(k.trim(), v.trim()),
            None => kv.insert("n", part.trim()),
        };
    }
    let num = |key: &str| -> Result<f64, CliError> {
        kv.get(key)
            .ok_or_else(|| CliError::usage(format!("generator `{name}` needs `{key}=`")))?
            .parse()
            .map_err(|_| CliError::usage(format!("generator `{name}`: `{key}` is not a number")))
    };
    let count = |key: &str| -> Result<usize, CliError> {
        let v = num(key)?;
        if v < 0.0 || v.fract() != 0.0 {
            return Err(CliError::usage(format!("generator `{name}`: `{key}` must be a count")));
        }
        Ok(v as usize)
    };
    let g = match name {
        "path" => named::path(count("n")?),
        "cycle" => named::cycle(count("n")?),
        "complete" => named::complete(count("n")?),
        "star" => named::star(count("leaves").or_else(|_| count("n"))?),
        "frucht" => named::frucht(),
        "er" => erdos_renyi(count("n")?, num("p")?, seed),
        "connected" => random_connected(count("n")?, num("p")?, seed),
        "class" => {
            let sizes = parse_list(
                kv.get("sizes").ok_or_else(|| CliError::usage("generator `class` needs `sizes=`"))?,
                "size",
            )?;
            let part = Partition::contiguous(&sizes)?;
            generate_class_graph(&part, num("h")?, num("deg")?, seed)?.graph
        }
        other => return Err(CliError::usage(format!("unknown generator `{other}`"))),
    };
    Ok(g)
}
