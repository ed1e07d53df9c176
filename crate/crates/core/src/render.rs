//! Aligned plain-text tables.

/// Render rows under a header, columns left-aligned and separated by two
/// spaces. Trailing whitespace is trimmed from every line; each line ends
/// with `\n`.
pub fn aligned_table<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| display_width(h.as_ref())).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(display_width(&flatten(cell)));
        }
    }
    let mut out = String::new();
    let mut push_line = |cells: Vec<String>| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate().take(cols) {
            line.push_str(cell);
            if i + 1 < cols {
                let pad = widths[i] - display_width(cell) + 2;
                line.extend(std::iter::repeat(' ').take(pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    push_line(header.iter().map(|h| h.as_ref().to_string()).collect());
    for row in rows {
        push_line(row.iter().map(|c| flatten(c)).collect());
    }
    out
}

/// Control characters would break the layout; show them escaped.
fn flatten(cell: &str) -> String {
    if !cell.chars().any(char::is_control) {
        return cell.to_string();
    }
    cell.chars()
        .map(|c| match c {
            '\n' => "\\n".to_string(),
            '\r' => "\\r".to_string(),
            '\t' => "\\t".to_string(),
            c if c.is_control() => format!("\\u{{{:x}}}", c as u32),
            c => c.to_string(),
        })
        .collect()
}

fn display_width(s: &str) -> usize {
    s.chars().count()
}
