"""Optional offline fine-tuning of the fill-mask model on a post corpus.

Masked-language-model objective over the ``text`` field of a JSONL corpus.
Defaults: 25 epochs, batch size 32, fixed learning rate 5e-5, 15% dynamic
masking, 512-token maximum length.  When a validation file is given, the
checkpoint with the lowest validation loss is kept.

Serving works fine with stock pretrained weights; this script exists for
runs that want the generator adapted to the target corpus first.

    python -m emoaug_sidecar.finetune --model roberta-base \\
        --train train.jsonl --valid valid.jsonl --out ./tuned
"""

from __future__ import annotations

import argparse
import json
import math
from pathlib import Path


def load_texts(path: str | Path) -> list[str]:
    texts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                texts.append(json.loads(line)["text"])
    if not texts:
        raise ValueError(f"no records in {path}")
    return texts


def finetune(
    model_id: str,
    train_path: str,
    out_dir: str,
    valid_path: str | None = None,
    epochs: int = 25,
    batch_size: int = 32,
    learning_rate: float = 5e-5,
    mask_rate: float = 0.15,
    max_length: int = 512,
    device: str = "cpu",
    seed: int = 0,
) -> Path:
    import torch
    from torch.utils.data import DataLoader
    from transformers import (
        AutoModelForMaskedLM,
        AutoTokenizer,
        DataCollatorForLanguageModeling,
    )

    torch.manual_seed(seed)
    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModelForMaskedLM.from_pretrained(model_id).to(device)

    def encode(texts):
        batch = tokenizer(texts, truncation=True, max_length=max_length)
        return [
            {"input_ids": ids, "attention_mask": mask}
            for ids, mask in zip(batch["input_ids"], batch["attention_mask"])
        ]

    collator = DataCollatorForLanguageModeling(tokenizer, mlm=True, mlm_probability=mask_rate)
    train_loader = DataLoader(
        encode(load_texts(train_path)), batch_size=batch_size, shuffle=True, collate_fn=collator
    )
    valid_loader = None
    if valid_path:
        valid_loader = DataLoader(
            encode(load_texts(valid_path)), batch_size=batch_size, shuffle=False, collate_fn=collator
        )

    optimizer = torch.optim.Adam(model.parameters(), lr=learning_rate)
    out = Path(out_dir)
    best_loss = math.inf

    for epoch in range(1, epochs + 1):
        model.train()
        total = 0.0
        for batch in train_loader:
            batch = {k: v.to(device) for k, v in batch.items()}
            loss = model(**batch).loss
            loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            total += float(loss)
        train_loss = total / max(1, len(train_loader))

        if valid_loader is not None:
            model.eval()
            with torch.no_grad():
                valid_total = sum(
                    float(model(**{k: v.to(device) for k, v in batch.items()}).loss)
                    for batch in valid_loader
                )
            epoch_loss = valid_total / max(1, len(valid_loader))
        else:
            epoch_loss = train_loss

        print(f"epoch {epoch}/{epochs} loss={epoch_loss:.4f}")
        if epoch_loss < best_loss:
            best_loss = epoch_loss
            model.save_pretrained(out)
            tokenizer.save_pretrained(out)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="emoaug-sidecar-finetune", description=__doc__)
    parser.add_argument("--model", required=True)
    parser.add_argument("--train", required=True, help="training corpus JSONL")
    parser.add_argument("--valid", help="validation corpus JSONL")
    parser.add_argument("--out", required=True, help="output model directory")
    parser.add_argument("--epochs", type=int, default=25)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--lr", type=float, default=5e-5)
    parser.add_argument("--mask-rate", type=float, default=0.15)
    parser.add_argument("--max-length", type=int, default=512)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    finetune(
        model_id=args.model,
        train_path=args.train,
        out_dir=args.out,
        valid_path=args.valid,
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        mask_rate=args.mask_rate,
        max_length=args.max_length,
        device=args.device,
        seed=args.seed,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
