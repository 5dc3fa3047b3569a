//! `mesh`: OBJ of a canal envelope, or of the curvature tube of a space curve.

use std::path::PathBuf;

use desitter::canal::mesh::{characteristic_sweep, polyline_obj};
use desitter::canal::{envelope_mesh, MeshReport};
use desitter::conformal::{curvature_tube_mesh, singular_locus_text};
use serde_json::{json, Value};

use crate::config::Options;
use crate::error::CliError;
use crate::generators::{canal_path, read_curve, space_curve, GenSpec, CURVE_GENERATORS};
use crate::report::{envelope, print_stdout, to_pretty, write_file, Outcome, Status};

fn is_curve_source(opts: &Options) -> Result<bool, CliError> {
    if let Some(path) = &opts.input {
        return Ok(read_curve(path)?.dim() == 3);
    }
    Ok(match &opts.generator {
        Some(g) => CURVE_GENERATORS.contains(&GenSpec::parse(g)?.name.as_str()),
        None => false,
    })
}

fn mesh_stats(m: &MeshReport) -> Value {
    json!({
        "vertices": m.mesh.vertices.len(),
        "triangles": m.mesh.triangles.len(),
        "euler_characteristic": m.mesh.euler_characteristic(),
        "closed": m.mesh.is_closed(),
        "min_triangle_area": m.mesh.min_triangle_area(),
        "culled_vertices": m.culled_vertices,
        "dropped_triangles": m.dropped_triangles,
        "closure_flip": m.closure_flip,
    })
}

fn write_obj(opts: &Options, obj: &str) -> Result<Value, CliError> {
    match &opts.out_obj {
        Some(path) => {
            write_file(path, obj)?;
            Ok(json!(path.display().to_string()))
        }
        None => {
            use std::io::Write;
            let _ = std::io::stdout().lock().write_all(obj.as_bytes());
            Ok(Value::Null)
        }
    }
}

fn annotation_path(opts: &Options) -> Option<PathBuf> {
    opts.out_annotation.clone().or_else(|| {
        opts.out_obj.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".singular.txt");
            PathBuf::from(s)
        })
    })
}

pub fn run(opts: &Options) -> Result<Outcome, CliError> {
    let nt = opts.nt.unwrap_or(96);
    let ntheta = opts.ntheta.unwrap_or(64);
    let result = if is_curve_source(opts)? {
        let (x, source) = space_curve(opts)?;
        let tube = curvature_tube_mesh(&x, nt, ntheta)?;
        let obj = write_obj(opts, &tube.report.mesh.to_obj())?;
        let annotation = match annotation_path(opts) {
            Some(p) => {
                write_file(&p, &singular_locus_text(&tube))?;
                json!(p.display().to_string())
            }
            None => Value::Null,
        };
        json!({
            "source": source,
            "kind": "curvature_tube",
            "obj": obj,
            "annotation": annotation,
            "mesh": mesh_stats(&tube.report),
            "singular_row": tube.singular_row,
            "singular_vertices": tube.singular_vertices.len(),
            "curve_residual": tube.curve_residual,
            "fold_fraction": tube.fold_fraction,
            "fold_jacobian": tube.fold_jacobian,
        })
    } else {
        let (path, source) = canal_path(opts)?;
        let m = envelope_mesh(&path, nt, ntheta)?;
        if m.degenerate {
            eprintln!(
                "warning: the characteristic circles do not sweep a surface; writing one circle as a polyline"
            );
            let sweep = characteristic_sweep(&path, nt)?;
            let points = sweep.circle_polyline(0, ntheta);
            let obj = write_obj(opts, &polyline_obj(&points, true))?;
            json!({
                "source": source,
                "kind": "polyline",
                "obj": obj,
                "degenerate": true,
                "points": points.len(),
            })
        } else {
            let obj = write_obj(opts, &m.mesh.to_obj())?;
            json!({
                "source": source,
                "kind": "envelope",
                "obj": obj,
                "degenerate": false,
                "mesh": mesh_stats(&m),
            })
        }
    };
    let report = envelope("mesh", Status::Ok, opts, result);
    let text = to_pretty(&report);
    if let Some(p) = &opts.out_json {
        write_file(p, &text)?;
    }
    if opts.out_obj.is_some() {
        print_stdout(&text);
    } else {
        eprintln!("{text}");
    }
    Ok(Outcome { status: Status::Ok })
}
