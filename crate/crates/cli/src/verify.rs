use std::io::Write;

use supersmooth_core::linalg;
use supersmooth_core::polyspline::{
    basis_spline_space, dim_spline_space, mos_oracle, smoothness_constraints, vertex_smoothness_order,
    violated_face, PiecewisePolynomial,
};
use supersmooth_core::taylor::piecewise_taylor;

use crate::{cap_for, read_cell, CliError, VerifyArgs};

/// Runs every check and prints one PASS/FAIL line each.
pub(crate) fn run(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.r > args.d {
        return Err(CliError::Input(format!("r = {} exceeds d = {}", args.r, args.d)));
    }
    let cell = read_cell(&args.cell)?;
    let (d, r) = (args.d, args.r);
    let report = dim_spline_space(&cell, d, r)?;
    let basis = match &args.basis {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            PiecewisePolynomial::list_from_json(&text)?
        }
        None => basis_spline_space(&cell, d, r)?,
    };
    let system = smoothness_constraints(&cell, d, r)?;
    let mos = mos_oracle(&cell, r, cap_for(args.cap, cell.dimension, r))?;

    let mut failures = Vec::new();
    let mut check = |name: &str, outcome: Result<String, String>, out: &mut dyn Write| -> Result<(), CliError> {
        match outcome {
            Ok(detail) => writeln!(out, "PASS {name}: {detail}")?,
            Err(detail) => {
                writeln!(out, "FAIL {name}: {detail}")?;
                failures.push(name.to_string());
            }
        }
        Ok(())
    };

    let soundness = (|| {
        if basis.len() != report.dimension {
            return Err(format!("{} splines for dimension {}", basis.len(), report.dimension));
        }
        let mut stacked = Vec::with_capacity(basis.len());
        for (i, s) in basis.iter().enumerate() {
            let x = system.encode(s).map_err(|e| format!("spline {i}: {e}"))?;
            if !system.matrix().annihilates(&x) {
                return Err(format!("spline {i} violates a smoothness condition"));
            }
            stacked.push(x);
        }
        if !linalg::independent(&stacked) {
            return Err("splines are linearly dependent".into());
        }
        Ok(format!("{} independent splines satisfy all {} conditions", basis.len(), system.rows().len()))
    })();
    check("basis soundness", soundness, out)?;

    let replicated = basis.iter().all(PiecewisePolynomial::all_pieces_equal);
    let degeneracy = if replicated == report.degenerate {
        Ok(format!("degenerate = {}", report.degenerate))
    } else {
        Err(format!(
            "degenerate = {} but replicated basis = {replicated}",
            report.degenerate
        ))
    };
    check("degeneracy", degeneracy, out)?;

    let bound = if mos.exact { format!("{}", mos.mos) } else { format!(">= {}", mos.mos) };
    let ceiling = d.max(mos.mos);
    let smooth = match basis
        .iter()
        .position(|s| vertex_smoothness_order(s, ceiling).is_none_or(|o| o < mos.mos))
    {
        None => Ok(format!("every spline is smooth to order mos = {bound} at the center")),
        Some(i) => Err(format!(
            "spline {i} has vertex smoothness {:?} below mos = {bound}",
            vertex_smoothness_order(&basis[i], ceiling)
        )),
    };
    check("vertex smoothness", smooth, out)?;

    let taylor = (|| {
        for (i, s) in basis.iter().enumerate() {
            for rho in 0..=d {
                if let Some((a, b, _)) = violated_face(&cell, &piecewise_taylor(s, rho), r) {
                    return Err(format!("truncation of spline {i} to order {rho} breaks C^{r} between {a} and {b}"));
                }
            }
        }
        Ok(format!("truncations to orders 0..={d} stay C^{r}"))
    })();
    check("piecewise taylor", taylor, out)?;

    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("failed: {}", failures.join(", "))))
    }
}
