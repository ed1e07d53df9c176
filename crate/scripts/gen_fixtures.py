#!/usr/bin/env python3
"""Regenerate the bundled mock-repository fixture corpus.

Output is deterministic: running this twice produces identical bytes.
"""
import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "fixtures"


def md(key, value, lang=None):
    d = {"key": key, "value": value}
    if lang:
        d["language"] = lang
    return d


def readings(rng, rows):
    out = ["timestamp,station,temperature,humidity,note"]
    for i in range(rows):
        day = 1 + (i // 24) % 28
        month = 1 + (i // (24 * 28)) % 12
        ts = f"2019-{month:02d}-{day:02d}T{i % 24:02d}:00:00"
        temp = 12.0 + 8.0 * math.sin(i / 24.0 * 2 * math.pi) + rng.uniform(-1.5, 1.5)
        hum = rng.randint(35, 95)
        temp_s = f"{temp:.2f}" if rng.random() > 0.03 else "NA"
        hum_s = str(hum) if rng.random() > 0.02 else ""
        note = rng.choice(["ok", "ok", "ok", "sensor check", "rain"])
        out.append(f"{ts},{rng.choice(['A', 'B', 'C'])},{temp_s},{hum_s},{note}")
    return "\n".join(out) + "\n"


def garden_sample(rng):
    out = ["time,temperature,humidity"]
    for i in range(48):
        t = f"2019-06-01T{i // 2:02d}:{(i % 2) * 30:02d}:00"
        temp = 18.0 + 6.0 * math.sin((i - 12) / 48.0 * 2 * math.pi) + rng.uniform(-0.5, 0.5)
        temp_s = f"{temp:.1f}" if i not in (7, 31) else ("NA" if i == 7 else "")
        hum = rng.randint(40, 80)
        out.append(f"{t},{temp_s},{hum}")
    return "\n".join(out) + "\n"


def quoted_notes(rng):
    out = ['id,observer,comment,value']
    phrases = [
        'clear sky',
        'light rain, then sun',
        'sensor "B" recalibrated',
        'multi-line note\nsecond line',
        'gusty wind\r\nnoted twice',
        'plain',
        '',
    ]
    for i in range(64):
        p = rng.choice(phrases)
        cell = '"' + p.replace('"', '""') + '"' if any(c in p for c in ',"\r\n') else p
        obs = rng.choice(["Anna", "Lukas", "Jonas", "Deniz"])
        out.append(f"{i + 1},{obs},{cell},{rng.randint(0, 500)}")
    # ends on an embedded newline so the tail window has to resolve quoting
    out.append('65,Anna,"last entry\nwith a break",7')
    return "\r\n".join(out) + "\r\n"


def tsv_measurements(rng):
    out = ["datum\tort\ttemperatur\tluftfeuchtigkeit"]
    for i in range(120):
        out.append(
            f"2020-07-{1 + i % 30:02d}\t{rng.choice(['Dahlem', 'Mitte', 'Adlershof'])}"
            f"\t{rng.uniform(14, 31):.1f}\t{rng.randint(30, 90)}"
        )
    return "\n".join(out) + "\n"


def simple_table(rng, header, rows, gen):
    out = [",".join(header)]
    for i in range(rows):
        out.append(",".join(gen(i)))
    return "\n".join(out) + "\n"


def write_set(name, items, files):
    base = ROOT / name
    (base / "files").mkdir(parents=True, exist_ok=True)
    next_id = 1
    for item in items:
        for bs in item["bitstreams"]:
            data = files[bs["name"]]
            bs["sizeBytes"] = len(data)
            bs["retrieveLink"] = f"/api/bitstreams/{name[:3]}-{next_id:04d}/retrieve"
            next_id += 1
            (base / "files" / bs["name"]).write_bytes(data)
    doc = {"items": items}
    (base / "items.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def bs(name, media):
    return {"name": name, "sizeBytes": 0, "mediaType": media, "retrieveLink": ""}


def main():
    rng = random.Random(10989)
    pdf = b"%PDF-1.4\n% fixture placeholder\n%%EOF\n"

    depositonce_files = {
        "name_of_file.csv": garden_sample(rng).encode(),
        "readings_2019.csv": readings(rng, 1000).encode(),
        "readme.pdf": pdf,
        "messungen.tsv": tsv_measurements(rng).encode(),
        "beobachtungen.csv": quoted_notes(rng).encode(),
        "air_quality.csv": simple_table(
            rng, ["station", "pm10", "no2"], 30,
            lambda i: [f"S{i % 5}", f"{rng.uniform(5, 60):.1f}", str(rng.randint(10, 70))],
        ).encode(),
        "soil.csv": simple_table(
            rng, ["depth_cm", "moisture", "temperature"], 25,
            lambda i: [str(5 * (i + 1)), f"{rng.uniform(0.1, 0.4):.3f}", f"{rng.uniform(8, 16):.2f}"],
        ).encode(),
        "notes.txt": "Soil profile notes.\nCollected with TDR probes.\n".encode(),
        "energy.csv": simple_table(
            rng, ["building", "year", "kwh"], 40,
            lambda i: [f"B{i % 8}", str(2015 + i % 5), str(rng.randint(10000, 90000))],
        ).encode(),
        "wind.csv": simple_table(
            rng, ["timestamp", "speed_ms"], 200,
            lambda i: [f"2021-03-{1 + i // 24 % 28:02d}T{i % 24:02d}:00:00", f"{rng.uniform(0, 18):.2f}"],
        ).encode(),
    }
    depositonce = [
        {
            "id": "10989",
            "handle": "11303/10989.2",
            "metadata": [
                md("dc.title", "Temperature and Humidity Measurements in Gardens", "en"),
                md("dc.contributor.author", "Schmidt, Anna"),
                md("dc.contributor.author", "Weber, Lukas"),
                md("dc.date.issued", "2019-05-14"),
                md("dc.subject", "temperature", "en"),
                md("dc.subject", "humidity", "en"),
                md("dc.subject", "urban gardens", "en"),
                md("dc.description", "Hourly temperature and humidity readings from community gardens.", "en"),
            ],
            "bitstreams": [bs("name_of_file.csv", "text/csv"), bs("readings_2019.csv", "text/csv"), bs("readme.pdf", "application/pdf")],
        },
        {
            "id": "11020",
            "handle": "11303/11020",
            "metadata": [
                md("dc.title", "Temperatur und Feuchtigkeit in Berliner Gärten", "de"),
                md("dc.contributor.author", "Müller, Jonas"),
                md("dc.date.issued", "2020-08-01"),
                md("dc.subject", "Stadtklima", "de"),
                md("dc.description", "Messungen der Temperatur und Luftfeuchtigkeit", "de"),
                md("dc.publisher", "Technische Universität Berlin", "de"),
            ],
            "bitstreams": [bs("messungen.tsv", "text/tab-separated-values"), bs("beobachtungen.csv", "text/csv")],
        },
        {
            "id": "11045",
            "handle": "11303/11045",
            "metadata": [
                md("dc.title", "Air Quality Monitoring Network Berlin", "en"),
                md("dc.contributor.author", "Schmidt, Anna"),
                md("dc.date.issued", "2018-11-30"),
                md("dc.subject", "air quality", "en"),
                md("dc.description", "Particulate matter and nitrogen dioxide at five stations.", "en"),
            ],
            "bitstreams": [bs("air_quality.csv", "text/csv")],
        },
        {
            "id": "11102",
            "handle": "11303/11102",
            "metadata": [
                md("dc.title", "Soil Moisture and Temperature Profiles", "en"),
                md("dc.contributor.author", "Becker, Clara"),
                md("dc.subject", "soil", "en"),
                md("dc.description", "Depth profiles of soil moisture and soil temperature.", "en"),
            ],
            "bitstreams": [bs("soil.csv", "text/csv"), bs("notes.txt", "text/plain")],
        },
        {
            "id": "11150",
            "handle": "11303/11150",
            "metadata": [
                md("dc.title", "Energy Consumption of University Buildings", "en"),
                md("dc.contributor.author", "Weber, Lukas"),
                md("dc.contributor.author", "Becker, Clara"),
                md("dc.date.issued", "2021-02-10"),
                md("dc.subject", "energy", "en"),
            ],
            "bitstreams": [bs("energy.csv", "text/csv")],
        },
        {
            "id": "11233",
            "handle": "11303/11233",
            "metadata": [
                md("dc.title", "Windgeschwindigkeit Zeitreihe", "de"),
                md("dc.title", "Wind Speed Time Series", "en"),
                md("dc.contributor.author", "Müller, Jonas"),
                md("dc.date.issued", "2021-04-01"),
                md("dc.subject", "Wind", "de"),
            ],
            "bitstreams": [bs("wind.csv", "text/csv")],
        },
        {
            "id": "11305",
            "handle": "11303/11305",
            "metadata": [
                md("dc.title", "Groundwater Levels in the Spree Valley", "en"),
                md("dc.contributor.author", "Schmidt, Anna"),
                md("dc.date.issued", "2017"),
                md("dc.description", "Metadata-only record; data available on request.", "en"),
            ],
            "bitstreams": [],
        },
        {
            "id": "11310",
            "handle": "11303/11310",
            "metadata": [
                md("dc.title", "Messungen der Bodenfeuchte", "de"),
                md("dc.subject", "Boden", "de"),
            ],
            "bitstreams": [],
        },
    ]
    write_set("depositonce", depositonce, depositonce_files)

    refubium_files = {
        "dahlem_temperature.csv": simple_table(
            rng, ["date", "min_c", "max_c"], 90,
            lambda i: [f"2019-{1 + i // 30:02d}-{1 + i % 30:02d}", f"{rng.uniform(-5, 10):.1f}", f"{rng.uniform(10, 30):.1f}"],
        ).encode(),
        "greenhouse.csv": simple_table(
            rng, ["house", "temperature", "humidity"], 60,
            lambda i: [f"G{i % 3}", f"{rng.uniform(18, 35):.1f}", str(rng.randint(50, 99))],
        ).encode(),
        "niederschlag.csv": simple_table(
            rng, ["monat", "niederschlag_mm"], 12,
            lambda i: [f"2020-{i + 1:02d}", f"{rng.uniform(10, 90):.1f}"],
        ).encode(),
        "survey.csv": simple_table(
            rng, ["respondent", "discipline", "reuses_data"], 50,
            lambda i: [str(i + 1), rng.choice(["physics", "biology", "history", "chemistry"]), rng.choice(["yes", "no", "NA"])],
        ).encode(),
        "survey.pdf": pdf,
        "birds.csv": simple_table(
            rng, ["species", "count"], 35,
            lambda i: [rng.choice(["sparrow", "blackbird", "robin", "starling", "magpie"]), str(rng.randint(0, 40))],
        ).encode(),
    }
    refubium = [
        {
            "id": "2001",
            "handle": "188/2001",
            "metadata": [
                md("dc.title", "Temperature Records from the Botanical Garden Dahlem", "en"),
                md("dc.contributor.author", "Weber, Lukas"),
                md("dc.contributor.author", "Schmidt, Anna"),
                md("dc.date.issued", "2020-01-15"),
                md("dc.subject", "temperature", "en"),
                md("dc.description", "Daily minimum and maximum temperature.", "en"),
            ],
            "bitstreams": [bs("dahlem_temperature.csv", "text/csv")],
        },
        {
            "id": "2002",
            "handle": "188/2002",
            "metadata": [
                md("dc.title", "Humidity and Temperature in Greenhouses", "en"),
                md("dc.contributor.author", "Yilmaz, Deniz"),
                md("dc.date.issued", "2022-06-20"),
                md("dc.subject", "humidity", "en"),
                md("dc.subject", "temperature", "en"),
            ],
            "bitstreams": [bs("greenhouse.csv", "text/csv")],
        },
        {
            "id": "2003",
            "handle": "188/2003",
            "metadata": [
                md("dc.title", "Niederschlag in Brandenburg", "de"),
                md("dc.contributor.author", "Yilmaz, Deniz"),
                md("dc.date.issued", "2021-09-09"),
                md("dc.subject", "Niederschlag", "de"),
            ],
            "bitstreams": [bs("niederschlag.csv", "text/csv")],
        },
        {
            "id": "2004",
            "handle": "188/2004",
            "metadata": [
                md("dc.title", "Survey of Research Data Reuse", "en"),
                md("dc.contributor.author", "Becker, Clara"),
                md("dc.date.issued", "2021-12-01"),
                md("dc.subject", "research data", "en"),
            ],
            "bitstreams": [bs("survey.csv", "text/csv"), bs("survey.pdf", "application/pdf")],
        },
        {
            "id": "2005",
            "handle": "188/2005",
            "metadata": [
                md("dc.title", "Bird Population Counts in Urban Parks", "en"),
                md("dc.contributor.author", "Weber, Lukas"),
                md("dc.date.issued", "2018-04-22"),
                md("dc.subject", "ornithology", "en"),
            ],
            "bitstreams": [bs("birds.csv", "text/csv")],
        },
    ]
    write_set("refubium", refubium, refubium_files)



# Raw study tables: completion (task 2 participant 2 failed) and time on task.
TASK1_TIMES = [327, 751, 296, 211, 228, 310, 235, 481, 197, 380, 161, 182, 229, 281, 149, 170, 218, 209, 398, 246]
TASK2_TIMES = [288, 797, 240, 437, 310, 300, 257, 354, 233, 430, 317, 224, 374, 560, 250, 253, 342, 224, 405, 249]
SUS_SCORES = [82.5, 47.5, 70, 77.5, 75, 67.5, 90, 90, 100, 80, 82.5, 72.5, 72.5, 97.5, 90, 82.5, 75, 70, 82.5, 87.5]


def sus_answers(score):
    """One answer vector (q1..q10) whose SUS score equals `score`.

    Only the per-participant scores are published, so the answers are a
    reconstruction: the positive (odd) and negative (even) contributions are
    split as evenly as possible.
    """
    total = round(score / 2.5)
    x = (total + 1) // 2
    y = total - x
    odd = [1] * 5
    for k in range(x):
        odd[k % 5] += 1
    even = [5] * 5
    for k in range(y):
        even[k % 5] -= 1
    answers = []
    for o, e in zip(odd, even):
        answers += [o, e]
    return answers


def write_study():
    base = ROOT / "study"
    base.mkdir(parents=True, exist_ok=True)
    rows = ["participant,task,success,time_seconds"]
    for p, (t1, t2) in enumerate(zip(TASK1_TIMES, TASK2_TIMES), start=1):
        rows.append(f"P{p},1,1,{t1}")
        rows.append(f"P{p},2,{0 if p == 2 else 1},{t2}")
    (base / "sessions.csv").write_text("\n".join(rows) + "\n")
    rows = ["participant,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10"]
    for p, s in enumerate(SUS_SCORES, start=1):
        rows.append(f"P{p}," + ",".join(map(str, sus_answers(s))))
    (base / "sus.csv").write_text("\n".join(rows) + "\n")



if __name__ == "__main__":
    main()
    write_study()
