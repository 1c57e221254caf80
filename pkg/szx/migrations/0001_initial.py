from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('verify', 'Verify'), ('suite', 'Suite'), ('check_proof', 'Check proof')], max_length=20)),
                ('target', models.CharField(max_length=200)),
                ('seed', models.IntegerField(default=0)),
                ('passed', models.BooleanField(default=False)),
                ('report', models.JSONField(default=dict)),
                ('duration', models.FloatField(default=0.0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['-created_at'], name='szx_verific_created_4c1d2e_idx'), models.Index(fields=['command'], name='szx_verific_command_9a7b31_idx')],
            },
        ),
    ]
