use crate::ca::{CaModel, PointKind, SupplementaryProjection};
use crate::error::{Error, Result};

use super::svg::{escape, num, SvgDoc};

#[derive(Debug, Clone)]
pub struct CaMapOptions {
    pub title: String,
    pub size: f64,
    /// Label at most this many terms, choosing those that contribute most to
    /// the first two dimensions. `None` labels every term.
    pub max_terms: Option<usize>,
}

impl Default for CaMapOptions {
    fn default() -> Self {
        CaMapOptions {
            title: String::new(),
            size: 800.0,
            max_terms: Some(60),
        }
    }
}

/// Planar map of dimensions 1 and 2 with one scale on both axes: terms as
/// labelled dots, supplementary years as larger points joined in
/// chronological order.
pub fn render_ca_map(model: &CaModel, supplementary: &[SupplementaryProjection], options: &CaMapOptions) -> Result<Vec<u8>> {
    if model.dims() < 2 {
        return Err(Error::Dimensionality(model.dims()));
    }
    let cols = model.col_coords_principal();
    let mut terms: Vec<usize> = (0..cols.rows()).collect();
    if let Some(limit) = options.max_terms {
        let ctr = model.contributions(PointKind::Column);
        let weight = |j: usize| ctr[(j, 0)] + ctr[(j, 1)];
        terms.sort_by(|&a, &b| weight(b).total_cmp(&weight(a)).then(a.cmp(&b)));
        terms.truncate(limit);
        terms.sort_unstable();
    }

    let mut years: Vec<&SupplementaryProjection> = supplementary.iter().collect();
    if years.iter().all(|s| s.label.parse::<i64>().is_ok()) {
        years.sort_by_key(|s| s.label.parse::<i64>().unwrap_or_default());
    }

    let xy = terms
        .iter()
        .map(|&j| (cols[(j, 0)], cols[(j, 1)]))
        .chain(years.iter().map(|s| (s.coords[0], s.coords[1])));
    let extent = xy.fold(1e-12f64, |m, (x, y)| m.max(x.abs()).max(y.abs())) * 1.1;

    let size = options.size;
    let top = if options.title.is_empty() { 0.0 } else { 30.0 };
    let margin = 50.0;
    let half = (size - 2.0 * margin) / 2.0;
    let (cx, cy) = (size / 2.0, top + size / 2.0);
    let px = |x: f64| cx + x / extent * half;
    let py = |y: f64| cy - y / extent * half;

    let shares = model.inertia_share();
    let mut doc = SvgDoc::new(size, size + top);
    if !options.title.is_empty() {
        doc.line(format!(
            "<text class=\"title\" x=\"{}\" y=\"22\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
            num(cx),
            escape(&options.title)
        ));
    }
    doc.line(format!(
        "<line class=\"axis\" x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>",
        num(margin),
        num(size - margin),
        y = num(cy)
    ));
    doc.line(format!(
        "<line class=\"axis\" x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>",
        num(top + margin),
        num(top + size - margin),
        x = num(cx)
    ));
    doc.line(format!(
        "<text class=\"axis-label\" x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">Dimension 1 ({:.1}%)</text>",
        num(size - margin),
        num(cy + 16.0),
        100.0 * shares[0]
    ));
    doc.line(format!(
        "<text class=\"axis-label\" x=\"{}\" y=\"{}\" font-size=\"12\">Dimension 2 ({:.1}%)</text>",
        num(cx + 6.0),
        num(top + margin - 8.0),
        100.0 * shares[1]
    ));

    doc.line("<g class=\"terms\">");
    for &j in &terms {
        let (x, y) = (px(cols[(j, 0)]), py(cols[(j, 1)]));
        doc.line(format!(
            "<circle class=\"term-point\" cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"#4477aa\"/>",
            num(x),
            num(y)
        ));
        doc.line(format!(
            "<text class=\"term\" x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#224466\">{}</text>",
            num(x + 4.0),
            num(y - 3.0),
            escape(&model.col_labels()[j])
        ));
    }
    doc.line("</g>");

    if !years.is_empty() {
        if years.len() > 1 {
            doc.line("<g class=\"trajectory\">");
            for w in years.windows(2) {
                doc.line(format!(
                    "<line class=\"segment\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cc3311\" stroke-width=\"1.5\"/>",
                    num(px(w[0].coords[0])),
                    num(py(w[0].coords[1])),
                    num(px(w[1].coords[0])),
                    num(py(w[1].coords[1]))
                ));
            }
            doc.line("</g>");
        }
        doc.line("<g class=\"years\">");
        for s in &years {
            let (x, y) = (px(s.coords[0]), py(s.coords[1]));
            doc.line(format!(
                "<circle class=\"year-point\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#cc3311\"/>",
                num(x),
                num(y)
            ));
            doc.line(format!(
                "<text class=\"year\" x=\"{}\" y=\"{}\" font-size=\"12\" font-weight=\"bold\" fill=\"#cc3311\">{}</text>",
                num(x + 6.0),
                num(y + 4.0),
                escape(&s.label)
            ));
        }
        doc.line("</g>");
    }
    Ok(doc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{compute_ca, project_supplementary, CaInput};

    fn model(dims: usize) -> CaModel {
        let rows = vec![
            vec![5.0, 1.0, 0.0, 1.0],
            vec![1.0, 4.0, 2.0, 0.0],
            vec![0.0, 2.0, 6.0, 1.0],
            vec![2.0, 0.0, 1.0, 4.0],
        ];
        let input = CaInput::from_dense(
            (0..4).map(|i| format!("d{i}")).collect(),
            ["alpha", "beta", "gamma", "delta"].map(String::from).to_vec(),
            &rows,
        )
        .unwrap();
        compute_ca(&input, dims).unwrap()
    }

    #[test]
    fn trajectory_has_n_minus_one_segments() {
        let m = model(2);
        let years: Vec<_> = [
            (2012, [1.0, 0.0, 0.0, 1.0]),
            (2009, [1.0, 1.0, 0.0, 0.0]),
            (2010, [0.0, 1.0, 1.0, 0.0]),
            (2011, [0.0, 0.0, 1.0, 1.0]),
        ]
        .iter()
        .map(|(y, p)| project_supplementary(&m, p, &y.to_string()).unwrap())
        .collect();
        let svg = String::from_utf8(render_ca_map(&m, &years, &CaMapOptions::default()).unwrap()).unwrap();
        assert_eq!(svg.matches("class=\"segment\"").count(), 3);
        let first_year = svg.find(">2009</text>").unwrap();
        assert!(first_year < svg.find(">2012</text>").unwrap());
        assert!(svg.contains("Dimension 1 ("));
    }

    #[test]
    fn terms_only_map() {
        let svg = String::from_utf8(render_ca_map(&model(2), &[], &CaMapOptions::default()).unwrap()).unwrap();
        assert!(!svg.contains("trajectory"));
        assert_eq!(svg.matches("class=\"term\"").count(), 4);
    }

    #[test]
    fn one_dimension_is_rejected() {
        assert!(matches!(
            render_ca_map(&model(1), &[], &CaMapOptions::default()),
            Err(Error::Dimensionality(1))
        ));
    }
}
